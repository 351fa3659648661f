#pragma once

// Brute-force references for the test suite. Nothing here includes or links the core library.

#include <functional>
#include <vector>

namespace cocycle_oracles {

using Points = std::vector<std::vector<double>>;

struct Estimate {
    double value = 0.0;
    // 4x the Richardson residual |R - value at the finer mesh|.
    double error = 0.0;
};

// Richardson extrapolation from meshes m and 2m of a first-order scheme.
Estimate richardson(const std::function<double(int)>& at_mesh, int mesh);

// Piecewise-linear resampling with `mesh` equal sub-steps per segment.
Points refine(const Points& points, int mesh);

// Left-point nested sums of dx^{w_1} ... dx^{w_k} over consecutive samples.
double nested_riemann(const Points& samples, const std::vector<int>& word);

// Iterated integral of the piecewise-linear path through points; letters are 0-based.
Estimate quadrature_iterated_integral(const Points& points, const std::vector<int>& word, int mesh);

struct Node {
    int label = 0;
    std::vector<Node> children;
};

// Tree integral X^tau_t = int prod_children X^child_u dx^label_u by left-point sums.
double nested_tree_riemann(const Points& samples, const Node& tree);
// Forest value = product of its tree integrals.
Estimate quadrature_forest_integral(const Points& points, const std::vector<Node>& forest, int mesh);

// f(x) returns an m x d matrix, row-major. Left-point sums of f(x_u) dx_u.
using MatrixField = std::function<std::vector<double>(const std::vector<double>&)>;

// Samples of y_t = int_0^t f(x) dx on the refined grid.
Points riemann_integral_path(const MatrixField& f, int m, const Points& points, int mesh);
std::vector<Estimate> riemann_one_form_integral(const MatrixField& f, int m, const Points& points, int mesh);

// Max over all interior subsets of sum_k norms[t_k][t_{k+1}]^p, then the 1/p power.
// norms is an upper-triangular matrix over N <= 14 points.
double exhaustive_pvariation(const std::vector<std::vector<double>>& norms, double p);

} // namespace cocycle_oracles
