#pragma once

// Independent dense Gaussian-elimination reference for the boundary value
// problems. Assembles the full system from scratch and solves with partial
// pivoting; shares nothing with the sparse path it checks.

#include <cmath>
#include <vector>

#include "uniformize/network.hpp"

namespace oracle {

using uniformize::FiniteNetwork;
using uniformize::ScalarField;
using uniformize::VertexId;

inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        }
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        if (A[col][col] == 0.0) throw uniformize::Error("oracle: singular system");
        for (size_t r = col + 1; r < n; ++r) {
            double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (size_t r = n; r-- > 0;) {
        double s = b[r];
        for (size_t c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

/// Dense Dirichlet solve: clamp `value[v]` wherever clamped[v], harmonic rows
/// elsewhere.
inline ScalarField dirichlet(const FiniteNetwork& net, const std::vector<char>& clamped,
                             ScalarField value) {
    const int n = net.vertex_count();
    std::vector<int> row(static_cast<size_t>(n), -1);
    std::vector<VertexId> unknowns;
    for (VertexId v = 0; v < n; ++v) {
        if (!clamped[static_cast<size_t>(v)]) {
            row[static_cast<size_t>(v)] = static_cast<int>(unknowns.size());
            unknowns.push_back(v);
        }
    }
    if (unknowns.empty()) return value;
    const size_t m = unknowns.size();
    std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
    std::vector<double> b(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        VertexId v = unknowns[i];
        for (VertexId y : net.neighbors(v)) {
            double c = net.conductance(v, y);
            A[i][i] += c;
            if (clamped[static_cast<size_t>(y)]) {
                b[i] += c * value[y];
            } else {
                A[i][static_cast<size_t>(row[static_cast<size_t>(y)])] -= c;
            }
        }
    }
    auto x = dense_solve(std::move(A), std::move(b));
    for (size_t i = 0; i < m; ++i) value[unknowns[i]] = x[i];
    return value;
}

/// Dense Dirichlet-Neumann solve: Dirichlet vertices clamped; Neumann rows
/// sum only toward interior (free, non-Neumann) vertices; interior rows are
/// full Laplacians.
inline ScalarField dirichlet_neumann(const FiniteNetwork& net, const std::vector<char>& clamped,
                                     const std::vector<char>& neumann, ScalarField value) {
    const int n = net.vertex_count();
    std::vector<int> row(static_cast<size_t>(n), -1);
    std::vector<VertexId> unknowns;
    for (VertexId v = 0; v < n; ++v) {
        if (!clamped[static_cast<size_t>(v)]) {
            row[static_cast<size_t>(v)] = static_cast<int>(unknowns.size());
            unknowns.push_back(v);
        }
    }
    if (unknowns.empty()) return value;
    const size_t m = unknowns.size();
    std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
    std::vector<double> b(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        VertexId v = unknowns[i];
        bool is_neu = neumann[static_cast<size_t>(v)];
        for (VertexId y : net.neighbors(v)) {
            if (is_neu && (clamped[static_cast<size_t>(y)] || neumann[static_cast<size_t>(y)]))
                continue;
            double c = net.conductance(v, y);
            A[i][i] += c;
            if (clamped[static_cast<size_t>(y)]) {
                b[i] += c * value[y];
            } else {
                A[i][static_cast<size_t>(row[static_cast<size_t>(y)])] -= c;
            }
        }
    }
    auto x = dense_solve(std::move(A), std::move(b));
    for (size_t i = 0; i < m; ++i) value[unknowns[i]] = x[i];
    return value;
}

}  // namespace oracle
