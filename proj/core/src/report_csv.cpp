#include "peakonlab/report_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "peakonlab/errors.hpp"

namespace peakonlab {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse(const std::string& cell) {
    if (cell == "nan") return nan;
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) throw InvalidInput("report csv: bad number '" + cell + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct Shape {
    std::size_t m;  // peakons in the state
    std::size_t n;
    std::size_t k;
    std::size_t lambdas;
    std::size_t tracks() const { return n - k; }
};

std::vector<std::string> columns(const Shape& s) {
    std::vector<std::string> c{"t"};
    for (const char* name : {"q", "p"})
        for (std::size_t i = 1; i <= s.m; ++i) c.push_back(std::string(name) + "_" + std::to_string(i));
    for (const char* name : {"xtilde", "xmax"})
        for (std::size_t i = 1; i <= s.n; ++i) c.push_back(std::string(name) + "_" + std::to_string(i));
    c.push_back("E");
    c.push_back("F");
    for (std::size_t i = s.k + 1; i <= s.n; ++i) c.push_back("E_" + std::to_string(i));
    for (std::size_t i = s.k + 1; i <= s.n; ++i) c.push_back("F_" + std::to_string(i));
    for (std::size_t j = s.k + 1; j <= s.n; ++j)
        for (std::size_t l = 0; l < s.lambdas; ++l) c.push_back("I_j" + std::to_string(j) + "_lam" + std::to_string(l));
    c.push_back("Itilde_k");
    c.push_back("dist_h1");
    return c;
}

Shape shape_of(const ReportMeta& m) { return {m.peakons, m.scenario.size(), m.k, m.lambdas.size()}; }

}  // namespace

std::vector<std::string> report_columns(const Report& r) { return columns(shape_of(r.meta)); }

void write_report_csv(const Report& r, std::ostream& out) {
    const Shape s = shape_of(r.meta);
    const std::vector<std::string> head = columns(s);
    for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << head[i];
    out << '\n';
    for (std::size_t m = 0; m < r.size(); ++m) {
        std::vector<double> row{r.times[m]};
        const PeakonTrain& st = r.states[m];
        row.insert(row.end(), st.q().begin(), st.q().end());
        row.insert(row.end(), st.p().begin(), st.p().end());
        for (const auto* series : {&r.path.xtilde, &r.path.xmax}) {
            if (m < series->size()) row.insert(row.end(), (*series)[m].begin(), (*series)[m].end());
            else row.insert(row.end(), s.n, nan);
        }
        if (m < r.samples.size()) {
            const FunctionalSample& f = r.samples[m];
            row.push_back(f.E);
            row.push_back(f.F);
            row.insert(row.end(), f.E_i.begin(), f.E_i.end());
            row.insert(row.end(), f.F_i.begin(), f.F_i.end());
            for (const auto& slot : f.I) row.insert(row.end(), slot.begin(), slot.end());
            row.push_back(f.Itilde);
        } else {
            row.insert(row.end(), 2 + 2 * s.tracks() + s.tracks() * s.lambdas + 1, nan);
        }
        row.push_back(m < r.dist.size() ? r.dist[m] : nan);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
        out << '\n';
    }
}

void write_report_csv(const Report& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    write_report_csv(r, out);
}

Report read_report_csv(std::istream& in, const ReportMeta& meta) {
    const Shape s = shape_of(meta);
    const std::vector<std::string> expect = columns(s);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("report csv: empty file");
    if (split(line) != expect) throw InvalidInput("report csv: header does not match the manifest");

    Report r;
    r.meta = meta;
    bool has_samples = true;
    bool has_path = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() != expect.size()) throw InvalidInput("report csv: row with " + std::to_string(cells.size()) + " cells");
        std::vector<double> v(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) v[i] = parse(cells[i]);
        std::size_t at = 0;
        auto take = [&](std::size_t count) {
            std::vector<double> out(v.begin() + static_cast<std::ptrdiff_t>(at),
                                    v.begin() + static_cast<std::ptrdiff_t>(at + count));
            at += count;
            return out;
        };
        r.times.push_back(v[at++]);
        std::vector<double> q = take(s.m);
        std::vector<double> p = take(s.m);
        r.states.emplace_back(std::move(p), std::move(q));
        std::vector<double> xt = take(s.n);
        std::vector<double> xm = take(s.n);
        has_path = has_path && !xt.empty() && !std::isnan(xt.front());
        r.path.xtilde.push_back(std::move(xt));
        r.path.xmax.push_back(std::move(xm));

        FunctionalSample f;
        f.t = r.times.back();
        f.E = v[at++];
        f.F = v[at++];
        f.E_i = take(s.tracks());
        f.F_i = take(s.tracks());
        for (std::size_t j = 0; j < s.tracks(); ++j) f.I.push_back(take(s.lambdas));
        f.Itilde = v[at++];
        f.complement = nan;
        has_samples = has_samples && !std::isnan(f.E);
        r.samples.push_back(std::move(f));
        r.dist.push_back(v[at++]);
    }
    r.path.times = r.times;
    if (has_path) r.path.newton.assign(r.size(), NewtonStats{});
    else {
        r.path.xtilde.clear();
        r.path.xmax.clear();
    }
    if (!has_samples) r.samples.clear();
    return r;
}

Report read_report_csv(const std::string& path, const ReportMeta& meta) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read " + path);
    return read_report_csv(in, meta);
}

void write_sweep_csv(const SweepResult& r, std::ostream& out) {
    out << "eps,L,sup_dist,bound,margin,passed\n";
    for (const SweepCell& c : r.cells) {
        out << fmt(c.epsilon) << ',' << fmt(c.L) << ',' << fmt(c.error.empty() ? c.sup_dist : nan) << ','
            << fmt(c.bound) << ',' << fmt(c.error.empty() ? c.margin : nan) << ',' << (c.passed ? 1 : 0) << '\n';
    }
}

void write_sweep_csv(const SweepResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    write_sweep_csv(r, out);
}

}  // namespace peakonlab
