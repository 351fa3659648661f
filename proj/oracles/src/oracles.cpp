#include "cocycle_oracles/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace cocycle_oracles {

Estimate richardson(const std::function<double(int)>& at_mesh, int mesh)
{
    if (mesh < 64)
        throw std::invalid_argument("oracle mesh must be at least 64");
    double coarse = at_mesh(mesh);
    double fine = at_mesh(2 * mesh);
    double extrapolated = 2.0 * fine - coarse;
    return {extrapolated, 4.0 * std::abs(extrapolated - fine)};
}

Points refine(const Points& points, int mesh)
{
    Points out;
    if (points.empty())
        return out;
    out.push_back(points.front());
    for (std::size_t k = 1; k < points.size(); ++k) {
        const auto& a = points[k - 1];
        const auto& b = points[k];
        for (int j = 1; j <= mesh; ++j) {
            double u = static_cast<double>(j) / mesh;
            std::vector<double> x(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                x[i] = a[i] + u * (b[i] - a[i]);
            out.push_back(std::move(x));
        }
    }
    return out;
}

double nested_riemann(const Points& samples, const std::vector<int>& word)
{
    const std::size_t k = word.size();
    if (k == 0)
        return 1.0;
    // level[j] = running value of the integral over the first j letters.
    std::vector<double> level(k + 1, 0.0);
    level[0] = 1.0;
    for (std::size_t u = 0; u + 1 < samples.size(); ++u) {
        for (std::size_t j = k; j >= 1; --j) {
            double dx = samples[u + 1][word[j - 1]] - samples[u][word[j - 1]];
            level[j] += level[j - 1] * dx;
        }
    }
    return level[k];
}

Estimate quadrature_iterated_integral(const Points& points, const std::vector<int>& word, int mesh)
{
    return richardson([&](int m) { return nested_riemann(refine(points, m), word); }, mesh);
}

namespace {

// Running values of every subtree integral, updated in place with left-point sums.
struct TreeState {
    const Node* node;
    double value = 0.0;
    std::vector<TreeState> kids;
};

TreeState make_state(const Node& n)
{
    TreeState s{&n, 0.0, {}};
    for (const auto& c : n.children)
        s.kids.push_back(make_state(c));
    return s;
}

// Advance by one step; children are read before they are updated.
void step(TreeState& s, const std::vector<double>& dx)
{
    double integrand = 1.0;
    for (const auto& k : s.kids)
        integrand *= k.value;
    for (auto& k : s.kids)
        step(k, dx);
    s.value += integrand * dx[s.node->label];
}

} // namespace

double nested_tree_riemann(const Points& samples, const Node& tree)
{
    TreeState st = make_state(tree);
    std::vector<double> dx;
    for (std::size_t u = 0; u + 1 < samples.size(); ++u) {
        dx.resize(samples[u].size());
        for (std::size_t i = 0; i < dx.size(); ++i)
            dx[i] = samples[u + 1][i] - samples[u][i];
        step(st, dx);
    }
    return st.value;
}

Estimate quadrature_forest_integral(const Points& points, const std::vector<Node>& forest, int mesh)
{
    return richardson(
        [&](int m) {
            Points fine = refine(points, m);
            double v = 1.0;
            for (const auto& t : forest)
                v *= nested_tree_riemann(fine, t);
            return v;
        },
        mesh);
}

Points riemann_integral_path(const MatrixField& f, int m, const Points& points, int mesh)
{
    Points fine = refine(points, mesh);
    Points y;
    y.reserve(fine.size());
    y.push_back(std::vector<double>(m, 0.0));
    for (std::size_t u = 0; u + 1 < fine.size(); ++u) {
        std::vector<double> A = f(fine[u]);
        const std::size_t d = fine[u].size();
        std::vector<double> next = y.back();
        for (int r = 0; r < m; ++r)
            for (std::size_t j = 0; j < d; ++j)
                next[r] += A[r * d + j] * (fine[u + 1][j] - fine[u][j]);
        y.push_back(std::move(next));
    }
    return y;
}

std::vector<Estimate> riemann_one_form_integral(const MatrixField& f, int m, const Points& points, int mesh)
{
    std::vector<Estimate> out;
    for (int r = 0; r < m; ++r)
        out.push_back(richardson([&](int k) { return riemann_integral_path(f, m, points, k).back()[r]; }, mesh));
    return out;
}

double exhaustive_pvariation(const std::vector<std::vector<double>>& norms, double p)
{
    const std::size_t n = norms.size();
    if (n > 14)
        throw std::invalid_argument("exhaustive p-variation supports at most 14 points");
    if (n < 2)
        return 0.0;
    const std::size_t interior = n - 2;
    double best = -1.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << interior); ++mask) {
        double sum = 0.0;
        std::size_t prev = 0;
        for (std::size_t i = 1; i < n; ++i) {
            bool keep = i == n - 1 || (mask >> (i - 1)) & 1u;
            if (!keep)
                continue;
            sum = sum + std::pow(norms[prev][i], p);
            prev = i;
        }
        best = std::max(best, sum);
    }
    return std::pow(best, 1.0 / p);
}

} // namespace cocycle_oracles
