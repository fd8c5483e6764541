#ifndef CALABI_QUADRATURE_HPP
#define CALABI_QUADRATURE_HPP

#include "calabi/geometry.hpp"

namespace calabi {

enum class QuadratureRule { gauss_legendre, midpoint };

struct QuadratureConfig {
    int spatial_nodes_per_axis = 64;
    int time_nodes = 32;
    QuadratureRule rule = QuadratureRule::gauss_legendre;
};

// Nodes and weights on [a, b]. Gauss-Legendre nodes are computed by Newton
// iteration on the Legendre polynomial and cached per order; composite
// midpoint is the uniform alternative. Node order is ascending, so tensor
// sums over them are deterministic.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Rule1D rule_1d(QuadratureRule rule, int m, double a, double b);

// Integral of f over the box by a tensor-product rule with m nodes per axis,
// summed in lexicographic node order.
double integrate_box(const std::function<double(const Vec&)>& f,
                     const Box& box, QuadratureRule rule, int m);

// As above but f is evaluated once per node into a caller-visible loop;
// used where per-node work is expensive and the caller wants progress or
// shared state. Calls visit(node, weight) in deterministic order.
void for_each_node(const Box& box, QuadratureRule rule, int m,
                   const std::function<void(const Vec&, double)>& visit);

// Integral over [0,1] split at the listed interior kink times.
double integrate_time(const std::function<double(double)>& f,
                      QuadratureRule rule, int m,
                      const std::vector<double>& kinks = {});

} // namespace calabi

#endif // CALABI_QUADRATURE_HPP
