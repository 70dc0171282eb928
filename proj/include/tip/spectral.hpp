#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tip/graph.hpp"
#include "tip/matrix.hpp"

namespace tip {

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Mat<double> vectors;         // column k pairs with values[k]
};

// Cyclic Jacobi rotations for a symmetric matrix. Sweeps until the
// off-diagonal Frobenius norm drops below tol.
inline EigenDecomposition jacobi_eigensymm(Mat<double> a, double tol = 1e-10,
                                           int max_sweeps = 100) {
    if (a.rows() != a.cols()) throw param_error("jacobi_eigensymm: matrix not square");
    std::size_t n = a.rows();
    Mat<double> v = Mat<double>::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) < tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    EigenDecomposition dec;
    dec.values.reserve(n);
    dec.vectors = Mat<double>(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        dec.values.push_back(a(order[k], order[k]));
        // sign convention: first entry with magnitude above 1e-12 is positive
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            double e = v(r, order[k]);
            if (std::abs(e) > 1e-12) {
                sign = e > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) dec.vectors(r, k) = sign * v(r, order[k]);
    }
    return dec;
}

// Unnormalized graph Laplacian L = D - A over edge weights.
inline Mat<double> laplacian_matrix(const Graph& g) {
    Mat<double> a = adjacency_matrix(g);
    std::size_t n = a.rows();
    Mat<double> l(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
        for (std::size_t j = 0; j < n; ++j) l(i, j) = (i == j ? deg : 0.0) - a(i, j);
    }
    return l;
}

// Node features from the first k Laplacian eigenvectors (ascending
// eigenvalue order), for graphs that come without native features.
inline Mat<double> laplacian_features(const Graph& g, int k) {
    if (k < 1 || k > g.n) throw param_error("laplacian_features: k out of range");
    EigenDecomposition dec = jacobi_eigensymm(laplacian_matrix(g));
    return Mat<double>::from_fn(static_cast<std::size_t>(g.n), static_cast<std::size_t>(k),
                                [&](std::size_t r, std::size_t c) { return dec.vectors(r, c); });
}

// Attaches spectral features when the graph has none; feature dimension is
// min(k, n).
inline Graph ensure_features(const Graph& g, int k = 10) {
    if (g.x.cols() > 0) return g;
    if (g.n == 0) return g;
    return with_features(g, laplacian_features(g, std::min(k, g.n)));
}

} // namespace tip
