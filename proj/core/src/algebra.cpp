#include "cycloid/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cycloid {

Int floor_div(Int a, Int b) {
    Int q = a / b;
    Int r = a % b;
    return (r != 0 && r < 0) ? q - 1 : q;
}

Int floor_mod(Int a, Int b) { return a - b * floor_div(a, b); }

std::string to_string(Point p) {
    std::ostringstream os;
    os << '(' << p.xi << ',' << p.eta << ')';
    return os.str();
}

CycloidSpec::CycloidSpec(Int a, Int b, Int g, Int d) : alpha(a), beta(b), gamma(g), delta(d) {
    if (a < 1 || b < 1 || g < 1 || d < 1) {
        std::ostringstream os;
        os << "cycloid parameters must be positive, got (" << a << ',' << b << ',' << g << ','
           << d << ')';
        throw std::domain_error(os.str());
    }
}

std::string to_string(const CycloidSpec& spec) {
    std::ostringstream os;
    os << "C(" << spec.alpha << ',' << spec.beta << ',' << spec.gamma << ',' << spec.delta << ')';
    return os.str();
}

std::string to_string(const RegularCoordinate& rc) {
    std::ostringstream os;
    switch (rc.kind) {
    case RegularCoordinate::Kind::transition: os << "t["; break;
    case RegularCoordinate::Kind::fwd_place: os << "s["; break;
    case RegularCoordinate::Kind::bwd_place: os << "s'["; break;
    }
    os << rc.i << ',' << rc.j << ']';
    return os.str();
}

ParameterVector parameter_vector(const CycloidSpec& spec, Point v) {
    return {spec.delta * v.xi - spec.gamma * v.eta, spec.beta * v.xi + spec.alpha * v.eta,
            spec.area()};
}

bool equivalent(const CycloidSpec& spec, Point a, Point b) {
    return parameter_vector(spec, b - a).integral();
}

NormalizationWitness normalize(const CycloidSpec& spec, Point u) {
    const Int a = spec.area();
    const Int m = floor_div(u.xi * spec.delta - u.eta * spec.gamma, a);
    const Int n = floor_div(u.eta * spec.alpha + u.xi * spec.beta, a);
    // representative = u - A_matrix * (m, n) with A_matrix = ((alpha,gamma),(-beta,delta))
    Point rep{u.xi - (m * spec.alpha + n * spec.gamma), u.eta - (-m * spec.beta + n * spec.delta)};
    return {m, n, rep};
}

CycloidSpec dual(const CycloidSpec& spec) {
    return {spec.beta, spec.alpha, spec.delta, spec.gamma};
}

CycloidSpec shear(const CycloidSpec& spec, Int q, ShearDirection direction) {
    if (q < 1) throw std::domain_error("shear requires q >= 1");
    if (direction == ShearDirection::reduce_gamma) {
        if (!(spec.gamma > q * spec.alpha)) {
            std::ostringstream os;
            os << "shear requires gamma > q*alpha (" << spec.gamma << " <= " << q * spec.alpha
               << ')';
            throw std::domain_error(os.str());
        }
        return {spec.alpha, spec.beta, spec.gamma - q * spec.alpha, spec.delta + q * spec.beta};
    }
    if (!(spec.delta > q * spec.beta)) {
        std::ostringstream os;
        os << "shear requires delta > q*beta (" << spec.delta << " <= " << q * spec.beta << ')';
        throw std::domain_error(os.str());
    }
    return {spec.alpha, spec.beta, spec.gamma + q * spec.alpha, spec.delta - q * spec.beta};
}

std::vector<Point> fundamental_transitions(const CycloidSpec& spec) {
    // Canonical representatives live inside the bounding box of the
    // parallelogram spanned by (alpha,-beta) and (gamma,delta).
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(spec.area()));
    for (Int xi = 0; xi <= spec.alpha + spec.gamma; ++xi) {
        for (Int eta = -spec.beta; eta <= spec.delta; ++eta) {
            NormalizationWitness w = normalize(spec, {xi, eta});
            if (w.m == 0 && w.n_steps == 0) out.push_back({xi, eta});
        }
    }
    std::sort(out.begin(), out.end());
    if (static_cast<Int>(out.size()) != spec.area())
        throw std::logic_error("fundamental domain enumeration does not match area");
    return out;
}

namespace {

// Shortest directed transition cycle through the origin, counting one step
// per transition.  Successors of a canonical point are the canonical forms
// of (xi+1,eta) and (xi,eta+1).
Int search_min_cycle(const CycloidSpec& spec) {
    const Point origin{0, 0};
    std::map<Point, Int> dist;
    dist[origin] = 0;
    std::vector<Point> frontier{origin};
    const Point pre_fwd = normalize(spec, {-1, 0}).representative;
    const Point pre_bwd = normalize(spec, {0, -1}).representative;
    Int best = -1;
    if (pre_fwd == origin || pre_bwd == origin) return 1;
    Int depth = 0;
    while (!frontier.empty()) {
        std::vector<Point> next;
        for (Point p : frontier) {
            for (Point s : {normalize(spec, {p.xi + 1, p.eta}).representative,
                            normalize(spec, {p.xi, p.eta + 1}).representative}) {
                if (dist.emplace(s, depth + 1).second) {
                    if (s == pre_fwd || s == pre_bwd) {
                        const Int cycle = depth + 2; // dist to predecessor plus closing step
                        if (best < 0 || cycle < best) best = cycle;
                    }
                    next.push_back(s);
                }
            }
        }
        if (best >= 0) break; // BFS depth is monotone, first hit is minimal
        frontier = std::move(next);
        ++depth;
    }
    if (best < 0) throw std::logic_error("origin predecessors unreachable");
    return best;
}

} // namespace

MinimalCycle minimal_cycle_length(const CycloidSpec& spec) {
    if (spec.regular()) {
        const Int p = spec.process_len();
        if (spec.alpha <= spec.beta)
            return {p, MinimalCycle::Source::formula_a};
        if (p % spec.alpha == 0)
            return {spec.beta * (p / spec.alpha), MinimalCycle::Source::formula_b};
        if (spec.beta == spec.gamma && spec.gamma == spec.delta)
            return {2 * spec.beta, MinimalCycle::Source::formula_c};
    }
    return {search_min_cycle(spec), MinimalCycle::Source::search};
}

CycloidMetrics metrics(const CycloidSpec& spec) {
    CycloidMetrics m;
    m.area = spec.area();
    m.n = spec.n();
    const Int gf = std::gcd(spec.beta, spec.delta);
    const Int gb = std::gcd(spec.alpha, spec.gamma);
    m.fwd_cycle_len = m.area / gf;
    m.bwd_cycle_len = m.area / gb;
    m.fwd_cycle_count = gf;
    m.bwd_cycle_count = gb;
    m.fwd_tokens_per_cycle = spec.beta / gf;
    m.bwd_tokens_per_cycle = spec.alpha / gb;
    m.is_regular = spec.regular();
    m.is_coregular = spec.coregular();
    if (m.is_regular) m.process_len = m.area / spec.beta;
    if (m.is_coregular) m.coprocess_len = m.area / spec.alpha;
    m.min_cycle = minimal_cycle_length(spec).value;
    return m;
}

Point stand(const CycloidSpec& spec, const RegularCoordinate& rc) {
    if (!spec.regular())
        throw std::domain_error("stand is only defined for regular cycloids (beta | delta)");
    if (rc.kind != RegularCoordinate::Kind::transition)
        throw std::domain_error("stand expects a transition coordinate");
    const Int p = spec.process_len();
    if (rc.i < 0 || rc.i >= p || rc.j < 0 || rc.j >= spec.beta)
        throw std::domain_error("regular coordinate out of range");
    return normalize(spec, {rc.i - rc.j, -rc.j}).representative;
}

RegularCoordinate regular_label(const CycloidSpec& spec, Point pt) {
    if (!spec.regular())
        throw std::domain_error("regular labels require a regular cycloid (beta | delta)");
    const Int p = spec.process_len();
    const Point rep = normalize(spec, pt).representative;
    // Enumeration of the p*beta coordinates; specs are desk scale.
    std::map<Point, RegularCoordinate> table;
    for (Int j = 0; j < spec.beta; ++j)
        for (Int i = 0; i < p; ++i)
            table.emplace(stand(spec, {RegularCoordinate::Kind::transition, i, j}),
                          RegularCoordinate{RegularCoordinate::Kind::transition, i, j});
    auto it = table.find(rep);
    if (it == table.end())
        throw std::logic_error("canonical transition point missing from regular labelling");
    return it->second;
}

} // namespace cycloid
