#ifndef CALABI_CALABI_HPP
#define CALABI_CALABI_HPP

#include "calabi/flow.hpp"
#include "calabi/quadrature.hpp"

namespace calabi {

// Volume normalization used throughout: (d lambda)^n = n! * (Lebesgue volume)
// in our coordinates, so for n = 1 the form is the ordinary area dx dy.
double volume_normalization(int n);

// Cal(phi_H^1) = integral over [0,1] x M of H dt wedge (d lambda)^n,
// computed as a tensor quadrature over [0,1] x support (split at t-kinks).
double cal_from_hamiltonian(const TimeDepField& H, const QuadratureConfig& q);

// The compactly supported potential f with df = phi^* lambda - lambda,
// realized as the path integral
//   f(x) = int_0^1 [ <lambda(z), X_H(t, z)> + H(t, z) ] dt  along z = phi_H^t(x),
// by one extra quadrature coordinate of the flow ODE.
double pullback_potential(const TimeDepField& H, PrimitiveKind kind,
                          const Vec& x, const IntegratorConfig& cfg);

// Both built-in primitives in a single trajectory integration; returns
// (f_radial, f_xdy) and, through *endpoint, phi_H^1(x) when requested.
std::pair<double, double> pullback_potential_pair(const TimeDepField& H, const Vec& x,
                                                  const IntegratorConfig& cfg,
                                                  Vec* endpoint = nullptr);

// Cal(phi) = 1/(n+1) * integral of f_{lambda,phi} (d lambda)^n.
double cal_from_potential(const TimeDepField& H, PrimitiveKind kind,
                          const QuadratureConfig& q, const IntegratorConfig& cfg);

// ||H||_{L^(1,infty)} = int_0^1 max |H(t,.)| dt, with the spatial max taken
// over a uniform grid of the given per-axis resolution (an under-estimate;
// the resolution is reported in the result).
struct L1InfEstimate {
    double value = 0.0;
    int time_nodes = 0;
    int spatial_resolution = 0;
};

L1InfEstimate l1inf_norm(const TimeDepField& H, int time_nodes, int spatial_resolution);

// Both formulas side by side with their largest disagreement.
struct CalabiReport {
    double cal_H = 0.0;
    double cal_f_radial = 0.0;
    double cal_f_xdy = 0.0;
    double discrepancy = 0.0; // max |cal_H - cal_f_*| over computed kinds
    QuadratureConfig quad;
    IntegratorConfig integrator;
};

CalabiReport make_calabi_report(const TimeDepField& H, const QuadratureConfig& q,
                                const IntegratorConfig& cfg);

} // namespace calabi

#endif // CALABI_CALABI_HPP
