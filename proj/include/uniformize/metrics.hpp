#pragma once

#include "uniformize/rectnet.hpp"

namespace uniformize {

/// The pair-flux weight rho(e) = (2pi/period) exp((2pi/period) g(e-)) |dh(e)|.
struct PairFluxWeight {
    double period = 0.0;
    const ScalarField* g = nullptr;
    const ScalarField* h = nullptr;
};

double edge_weight(const PairFluxWeight& w, VertexId from, VertexId to);

/// Pair-flux length of a closed level curve of g at value m: the edge sum,
/// which must match 2pi exp((2pi/period) m). Throws when the mismatch
/// exceeds tol_rel (an upstream inconsistency).
double g_level_length(const PairFluxWeight& w, const LevelCurve& curve, double tol_rel = 1e-9);

/// Length of a level curve of h joining the boundary arcs:
/// exp(g at the E1 end) - exp(g at the E2 end).
double h_level_length(const ScalarField& g, const LevelCurve& curve);

/// nu(R) = 1/2 (exp((2pi/p) g_top)^2 - exp((2pi/p) g_base)^2) * (2pi dh / p).
double cell_measure_nu(const RectNet::Cell& cell, double period);

/// lambda(R) = (2pi dh / p) * log(r_top / r_base) with r = exp((2pi/p) g).
double cell_measure_lambda(const RectNet::Cell& cell, double period);

/// Closed form for the total nu over the net: pi (exp(2 (2pi/p) k) - 1).
double total_measure_nu(double k, double period);

}  // namespace uniformize
