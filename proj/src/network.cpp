#include "uniformize/network.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace uniformize {

namespace {
std::pair<VertexId, VertexId> key(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}
}  // namespace

VertexId FiniteNetwork::add_vertex(Vec2 p) {
    pos_.push_back(p);
    nbr_.emplace_back();
    return static_cast<VertexId>(pos_.size() - 1);
}

void FiniteNetwork::require_vertex(VertexId v) const {
    if (v < 0 || v >= vertex_count()) throw Error("unknown vertex id " + std::to_string(v));
}

void FiniteNetwork::add_edge(VertexId a, VertexId b, double conductance) {
    require_vertex(a);
    require_vertex(b);
    if (a == b) throw Error("self loop at vertex " + std::to_string(a));
    auto [it, inserted] = cond_.emplace(key(a, b), conductance);
    if (!inserted) throw Error("duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    nbr_[static_cast<size_t>(a)].push_back(b);
    nbr_[static_cast<size_t>(b)].push_back(a);
}

void FiniteNetwork::set_conductance(VertexId a, VertexId b, double c) {
    auto it = cond_.find(key(a, b));
    if (it == cond_.end()) throw Error("no edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    it->second = c;
}

bool FiniteNetwork::has_edge(VertexId a, VertexId b) const {
    return cond_.count(key(a, b)) > 0;
}

double FiniteNetwork::conductance(VertexId a, VertexId b) const {
    auto it = cond_.find(key(a, b));
    if (it == cond_.end()) throw Error("no edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    return it->second;
}

const std::vector<VertexId>& FiniteNetwork::neighbors(VertexId v) const {
    require_vertex(v);
    return nbr_[static_cast<size_t>(v)];
}

std::vector<VertexId> FiniteNetwork::neighbors_ccw(VertexId v) const {
    std::vector<VertexId> out = neighbors(v);
    Vec2 p = position(v);
    std::sort(out.begin(), out.end(), [&](VertexId a, VertexId b) {
        Vec2 pa = position(a) - p, pb = position(b) - p;
        double ta = std::atan2(pa.y, pa.x), tb = std::atan2(pb.y, pb.x);
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return out;
}

bool FiniteNetwork::is_boundary_vertex(VertexId v) const {
    return boundary_component_of(v) >= 0;
}

int FiniteNetwork::boundary_component_of(VertexId v) const {
    for (size_t i = 0; i < boundary_.size(); ++i) {
        for (VertexId b : boundary_[i]) {
            if (b == v) return static_cast<int>(i);
        }
    }
    return -1;
}

void FiniteNetwork::rebuild_slaves() {
    slaves_.clear();
    for (VertexId v = 0; v < vertex_count(); ++v) {
        const auto& nbrs = nbr_[static_cast<size_t>(v)];
        if (nbrs.empty()) continue;
        bool all_zero = true;
        for (VertexId y : nbrs) {
            if (conductance(v, y) != 0.0) all_zero = false;
        }
        if (!all_zero) continue;
        // find the neighbor pair v lies strictly between
        bool found = false;
        for (size_t i = 0; i < nbrs.size() && !found; ++i) {
            for (size_t j = i + 1; j < nbrs.size() && !found; ++j) {
                Vec2 pa = position(nbrs[i]), pb = position(nbrs[j]), pv = position(v);
                Vec2 d = pb - pa;
                double len2 = dot(d, d);
                if (len2 == 0) continue;
                double t = dot(pv - pa, d) / len2;
                if (t <= 1e-9 || t >= 1 - 1e-9) continue;
                Vec2 proj = lerp(pa, pb, t);
                if (dist(proj, pv) > 1e-9 * std::sqrt(len2)) continue;
                add_slave(v, nbrs[i], nbrs[j], t);
                found = true;
            }
        }
        if (!found) throw Error("vertex " + std::to_string(v) + " has only zero-conductance edges and no carrier");
    }
}

void FiniteNetwork::check_valid() const {
    for (const auto& [e, c] : cond_) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw Error("non-positive conductance on edge (" + std::to_string(e.first) + "," +
                        std::to_string(e.second) + ")");
        }
    }
    if (vertex_count() == 0) throw Error("empty network");
    // connectivity over all edges (including zero-conductance arcs)
    std::vector<char> seen(static_cast<size_t>(vertex_count()), 0);
    std::deque<VertexId> q{0};
    seen[0] = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        for (VertexId w : nbr_[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                q.push_back(w);
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), 1) != vertex_count()) throw Error("network is not connected");
}

double laplacian(const FiniteNetwork& net, const ScalarField& u, VertexId x) {
    const auto& nbrs = net.neighbors(x);
    if (nbrs.empty()) throw Error("vertex " + std::to_string(x) + " has no neighbors");
    double s = 0.0;
    for (VertexId y : nbrs) s += net.conductance(x, y) * (u[x] - u[y]);
    return s;
}

double normal_derivative(const FiniteNetwork& net, const ScalarField& u, VertexId x,
                         const std::vector<char>& in_f) {
    if (in_f[static_cast<size_t>(x)]) throw Error("vertex " + std::to_string(x) + " is not in the vertex boundary of F");
    double s = 0.0;
    bool touches = false;
    for (VertexId y : net.neighbors(x)) {
        if (in_f[static_cast<size_t>(y)]) {
            touches = true;
            s += net.conductance(x, y) * (u[x] - u[y]);
        }
    }
    if (!touches) throw Error("vertex " + std::to_string(x) + " is not in the vertex boundary of F");
    return s;
}

double normal_derivative(const FiniteNetwork& net, const ScalarField& u, VertexId x,
                         std::span<const VertexId> F) {
    std::vector<char> in_f(static_cast<size_t>(net.vertex_count()), 0);
    for (VertexId v : F) in_f[static_cast<size_t>(v)] = 1;
    return normal_derivative(net, u, x, in_f);
}

namespace {

/// Solve the clamped Laplacian system. `clamped[v]` marks fixed values already
/// stored in `field`; `neumann[v]` marks vertices whose equation only sums
/// neighbors that are free interior vertices (zero normal derivative).
/// Slave vertices are excluded and backfilled by interpolation afterwards.
ScalarField solve_clamped(const FiniteNetwork& net, std::vector<char> clamped,
                          const std::vector<char>& neumann, ScalarField field) {
    const int n = net.vertex_count();
    std::vector<char> slave(static_cast<size_t>(n), 0);
    for (const auto& s : net.slaves()) {
        if (!clamped[static_cast<size_t>(s.v)]) slave[static_cast<size_t>(s.v)] = 1;
    }
    std::vector<int> row(static_cast<size_t>(n), -1);
    std::vector<VertexId> unknowns;
    for (VertexId v = 0; v < n; ++v) {
        if (!clamped[static_cast<size_t>(v)] && !slave[static_cast<size_t>(v)]) {
            row[static_cast<size_t>(v)] = static_cast<int>(unknowns.size());
            unknowns.push_back(v);
        }
    }
    auto backfill = [&](ScalarField f) {
        for (const auto& s : net.slaves()) {
            if (clamped[static_cast<size_t>(s.v)]) continue;
            f[s.v] = (1.0 - s.t) * f[s.a] + s.t * f[s.b];
        }
        return f;
    };
    if (unknowns.empty()) return backfill(std::move(field));

    auto counts_neighbor = [&](VertexId v, VertexId y) {
        // Interior rows couple to every neighbor; Neumann rows couple only to
        // interior (non-boundary-role) unknowns.
        if (!neumann[static_cast<size_t>(v)]) return true;
        return !clamped[static_cast<size_t>(y)] && !neumann[static_cast<size_t>(y)];
    };

    const int m = static_cast<int>(unknowns.size());
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        VertexId v = unknowns[static_cast<size_t>(i)];
        double diag = 0.0;
        for (VertexId y : net.neighbors(v)) {
            if (!counts_neighbor(v, y)) continue;
            double c = net.conductance(v, y);
            if (c == 0.0) continue;
            diag += c;
            if (clamped[static_cast<size_t>(y)]) {
                rhs[i] += c * field[y];
            } else {
                trips.emplace_back(i, row[static_cast<size_t>(y)], -c);
            }
        }
        if (diag <= 0.0) {
            throw Error("underdetermined system: vertex " + std::to_string(v) +
                        " has no coupling to boundary data");
        }
        trips.emplace_back(i, i, diag);
    }

    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    Eigen::VectorXd x;
    if (ldlt.info() == Eigen::Success) {
        x = ldlt.solve(rhs);
    }
    if (ldlt.info() != Eigen::Success) {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(A);
        cg.setTolerance(1e-12);
        x = cg.solve(rhs);
        if (cg.info() != Eigen::Success) throw Error("linear solve failed");
    }
    for (int i = 0; i < m; ++i) field[unknowns[static_cast<size_t>(i)]] = x[i];
    return backfill(std::move(field));
}

void check_interior_reaches_boundary(const FiniteNetwork& net, const std::vector<char>& clamped) {
    // Flood from clamped vertices across positive-conductance edges.
    const int n = net.vertex_count();
    std::vector<char> seen = clamped;
    for (const auto& s : net.slaves()) seen[static_cast<size_t>(s.v)] = 1;
    std::deque<VertexId> q;
    for (VertexId v = 0; v < n; ++v) {
        if (clamped[static_cast<size_t>(v)]) q.push_back(v);
    }
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        for (VertexId w : net.neighbors(v)) {
            if (net.conductance(v, w) == 0.0) continue;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                q.push_back(w);
            }
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (!seen[static_cast<size_t>(v)]) {
            throw Error("interior component containing vertex " + std::to_string(v) +
                        " touches no boundary data");
        }
    }
}

}  // namespace

ScalarField solve_dirichlet(const FiniteNetwork& net, const DirichletSpec& spec) {
    if (spec.high_set.empty()) throw Error("Dirichlet high set is empty");
    size_t low_total = 0;
    for (const auto& low : spec.low_sets) low_total += low.size();
    if (low_total == 0) throw Error("Dirichlet low sets are empty");
    if (!(spec.k > 0)) throw Error("Dirichlet constant k must be positive");
    for (const auto& [e, c] : net.edges()) {
        if (c < 0) throw Error("negative conductance");
    }

    const int n = net.vertex_count();
    ScalarField field;
    field.values.assign(static_cast<size_t>(n), 0.0);
    std::vector<char> clamped(static_cast<size_t>(n), 0);
    for (VertexId v : spec.high_set) {
        clamped[static_cast<size_t>(v)] = 1;
        field[v] = spec.k;
    }
    for (const auto& low : spec.low_sets) {
        for (VertexId v : low) {
            if (clamped[static_cast<size_t>(v)]) throw Error("Dirichlet sets overlap at vertex " + std::to_string(v));
            clamped[static_cast<size_t>(v)] = 1;
            field[v] = 0.0;
        }
    }
    check_interior_reaches_boundary(net, clamped);
    std::vector<char> no_neumann(static_cast<size_t>(n), 0);
    return solve_clamped(net, std::move(clamped), no_neumann, std::move(field));
}

ScalarField solve_dirichlet_neumann(const FiniteNetwork& net, const DirichletNeumannSpec& spec) {
    if (spec.dirichlet.empty()) throw Error("Dirichlet-Neumann problem needs Dirichlet data");
    const int n = net.vertex_count();
    ScalarField field;
    field.values.assign(static_cast<size_t>(n), 0.0);
    std::vector<char> clamped(static_cast<size_t>(n), 0);
    std::vector<char> neumann(static_cast<size_t>(n), 0);
    for (const auto& arc : spec.dirichlet) {
        for (VertexId v : arc.vertices) {
            clamped[static_cast<size_t>(v)] = 1;
            field[v] = arc.value;
        }
    }
    for (const auto& arc : spec.neumann) {
        for (VertexId v : arc) {
            if (clamped[static_cast<size_t>(v)]) continue;  // corners stay Dirichlet
            neumann[static_cast<size_t>(v)] = 1;
        }
    }
    ScalarField out = solve_clamped(net, clamped, neumann, std::move(field));

    // Consistency: total boundary flux vanishes for an exact solution.
    std::vector<char> in_f(static_cast<size_t>(n), 0);
    for (VertexId v = 0; v < n; ++v) {
        in_f[static_cast<size_t>(v)] = !clamped[static_cast<size_t>(v)] && !neumann[static_cast<size_t>(v)];
    }
    double total = 0.0, scale = 0.0;
    for (VertexId v = 0; v < n; ++v) {
        if (in_f[static_cast<size_t>(v)]) continue;
        double s = 0.0;
        for (VertexId y : net.neighbors(v)) {
            if (!in_f[static_cast<size_t>(y)]) continue;
            double term = net.conductance(v, y) * (out[v] - out[y]);
            s += term;
            scale += std::abs(term);
        }
        total += s;
    }
    if (std::abs(total) > 1e-9 * (scale + 1.0)) {
        throw Error("Dirichlet-Neumann consistency violated: total flux " + std::to_string(total));
    }
    return out;
}

double green_identity_residual(const FiniteNetwork& net, const ScalarField& u,
                               const ScalarField& v, std::span<const VertexId> F) {
    const int n = net.vertex_count();
    std::vector<char> in_f(static_cast<size_t>(n), 0);
    for (VertexId x : F) in_f[static_cast<size_t>(x)] = 1;

    double lhs = 0.0;
    for (const auto& [e, c] : net.edges()) {
        if (!in_f[static_cast<size_t>(e.first)] && !in_f[static_cast<size_t>(e.second)]) continue;
        lhs += c * (u[e.first] - u[e.second]) * (v[e.first] - v[e.second]);
    }

    double rhs = 0.0;
    std::set<VertexId> delta;
    for (VertexId x = 0; x < n; ++x) {
        if (!in_f[static_cast<size_t>(x)]) continue;
        rhs += laplacian(net, u, x) * v[x];
        for (VertexId y : net.neighbors(x)) {
            if (!in_f[static_cast<size_t>(y)]) delta.insert(y);
        }
    }
    for (VertexId x : delta) rhs += normal_derivative(net, u, x, in_f) * v[x];
    return std::abs(lhs - rhs);
}

double harmonic_residual(const FiniteNetwork& net, const ScalarField& u,
                         std::span<const VertexId> vertices) {
    double r = 0.0;
    for (VertexId v : vertices) r = std::max(r, std::abs(laplacian(net, u, v)));
    return r;
}

std::vector<VertexId> max_principle_violations(const FiniteNetwork& net, const ScalarField& u,
                                               const std::vector<char>& clamped) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
        if (!clamped[static_cast<size_t>(v)]) continue;
        if (first) {
            lo = hi = u[v];
            first = false;
        } else {
            lo = std::min(lo, u[v]);
            hi = std::max(hi, u[v]);
        }
    }
    std::vector<VertexId> bad;
    if (first || lo == hi) return bad;  // constant data: nothing strict to check
    for (VertexId v = 0; v < net.vertex_count(); ++v) {
        if (clamped[static_cast<size_t>(v)]) continue;
        if (!(u[v] > lo && u[v] < hi)) bad.push_back(v);
    }
    return bad;
}

}  // namespace uniformize
