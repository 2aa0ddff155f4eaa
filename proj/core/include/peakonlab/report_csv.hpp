#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "peakonlab/harness.hpp"

namespace peakonlab {

// Columns: t, q_1..q_M, p_1..p_M (M peakons in the state, M >= N when small
// peakons were added), xtilde_1..N, xmax_1..N, E, F, E_{k+1}..E_N,
// F_{k+1}..F_N, I_j{j}_lam{l} (j = k+1..N, l = 0..), Itilde_k, dist_h1.
// Values are written with 17 significant digits so a read-back is exact.
std::vector<std::string> report_columns(const Report& r);
void write_report_csv(const Report& r, std::ostream& out);
void write_report_csv(const Report& r, const std::string& path);

// Rebuilds the series of a report; `meta` comes from the run manifest.
// Quantities without a column (IE, IF, complement, integrator and Newton
// statistics) are left empty or NaN.
Report read_report_csv(std::istream& in, const ReportMeta& meta);
Report read_report_csv(const std::string& path, const ReportMeta& meta);

// eps, L, sup_dist, bound, margin, passed
void write_sweep_csv(const SweepResult& r, std::ostream& out);
void write_sweep_csv(const SweepResult& r, const std::string& path);

}  // namespace peakonlab
