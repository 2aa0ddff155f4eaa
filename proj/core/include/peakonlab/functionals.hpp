#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "peakonlab/dynamics.hpp"
#include "peakonlab/quadrature.hpp"
#include "peakonlab/train.hpp"
#include "peakonlab/weight.hpp"

namespace peakonlab {

// sigma_0 = min(c_{k+1}, c_{k+2} - c_{k+1}, .., c_N - c_{N-1}) / 4.
double sigma0(std::span<const double> c, std::size_t k);

double energy_E(const GridField& f);  // int u^2 + u_x^2
double energy_F(const GridField& f);  // int u^3 + u u_x^2

// Value of the field at x: cubic Hermite in (u, u_x) between the nearest
// nodes or kink limits, so fourth order on piecewise-smooth fields.
double field_value(const GridField& f, double x, Side side = Side::center);
// Largest value of u over nodes and kink limits.
double field_max(const GridField& f);

// Partition function Phi_i at x (0-based slot i into fam.right, so slot 0 is
// Phi_{k+1}); the last slot is Psi_K(x - y_N).
double phi(const WeightFamily& fam, std::size_t time_index, std::size_t slot, double x);

struct FunctionalSample {
    double t = 0.0;
    double E = 0.0;
    double F = 0.0;
    std::vector<double> E_i;                 // slots k+1..N
    std::vector<double> F_i;
    std::vector<std::vector<double>> I;      // I[slot][lambda index]
    double Itilde = 0.0;                     // NaN when k = 0
    // int Psi_{j,K} e and int Psi_{j,K} f for the positive tracks; I = IE - lambda IF.
    std::vector<double> IE;
    std::vector<double> IF;
    double complement = 0.0;  // int [1 - Psi(y_k - x) - Psi(x - y_{k+1})] (u^2 + u_x^2), NaN when k = 0
};

FunctionalSample localized_functionals(const GridField& f, const WeightFamily& fam, std::size_t time_index,
                                       std::span<const double> lambdas);
FunctionalSample localized_functionals(const GridField& f, const WeightFamily& fam, double t,
                                       std::span<const double> lambdas);

// h = (1 - d^2)^{-1} v = (A + B) / 2, h_x = (B - A) / 2, with
// A(x) = int_{-inf}^x e^{-(x-y)} v,  B(x) = int_x^inf e^{-(y-x)} v.
struct HelmholtzField {
    Grid grid;
    std::vector<double> h;
    std::vector<double> hx;
    std::vector<double> a;
    std::vector<double> b;
};

// v sampled at the nodes; a unit mass h^{-1} at one node maps to exactly
// e^{-|x - x_m|} / 2.
HelmholtzField helmholtz_inverse(const Grid& grid, std::span<const double> v);
// v given pointwise on the field, with cells split at its kinks.
HelmholtzField helmholtz_inverse(const GridField& f, const std::function<double(const FieldPoint&)>& v);
// v = u^2 + u_x^2 / 2.
HelmholtzField helmholtz_inverse(const GridField& f);

// min over the grid of h^2 - h_x^2 (= A B >= 0 for v >= 0, up to rounding).
double check_h_dominance(const HelmholtzField& h);

struct Lemma1Result {
    double eq1_residual = 0.0;
    double eq2_slack = 0.0;
    double M = 0.0;
};

// eq1: E(u) - E(phi_c) - ||u - phi_c(. - xi)||^2 - 4c(u(xi) - c)
// eq2: M E(u) - F(u) - (2/3) M^3
Lemma1Result lemma1_checks(const GridField& f, double c, double xi);

// Weight g with analytic g' and g''' and the points where g''' jumps.
struct WeightFunction {
    std::function<double(double)> g;
    std::function<double(double, Side)> g1;
    std::function<double(double, Side)> g3;
    std::vector<double> breaks;
};

WeightFunction constant_weight();
WeightFunction scaled_weight(const WeightProfile& profile, double K, double center);

// go:   d/dt int (u^2+u_x^2) g  vs  int (u^3+4uu_x^2) g' - int u^3 g''' - 2 int u h g'
// gogo: d/dt int (u^3+uu_x^2) g  vs  int (u^4/4+u^2u_x^2) g' + int u^2 h g' + int (h^2-h_x^2) g'
// go_derived: the first left side against int u u_x^2 g' + 2 int u h g', which is
// what u_t = -u u_x - h_x gives directly.
struct IdentityResidual {
    double go = 0.0;
    double gogo = 0.0;
    double go_derived = 0.0;
    double lhs_go = 0.0;
    double lhs_gogo = 0.0;
    double rhs_go = 0.0;
    double rhs_gogo = 0.0;
    double rhs_go_derived = 0.0;
};

// Centered difference in time of int (u^2+u_x^2) g and int (u^3+u u_x^2) g
// around the state at time t of `traj`, minus the quadrature of the right
// sides of the two identities. The neighbours at t -+ dt are obtained by
// integrating the ODE from the stored state.
IdentityResidual derivative_identity_check(const Trajectory& traj, const WeightFunction& g, double t, double dt,
                                           double grid_h, double pad = 25.0);
// Same, starting from an explicit state.
IdentityResidual derivative_identity_check(const PeakonTrain& state, const WeightFunction& g, double dt,
                                           double grid_h, double pad = 25.0, double rel_tol = 1e-13);

}  // namespace peakonlab
