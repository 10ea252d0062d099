#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cycloid {

using Int = std::int64_t;

// Floor division/modulo toward minus infinity (b > 0), so that
// a mod b = a - b*floor(a/b) also holds for negative a.
Int floor_div(Int a, Int b);
Int floor_mod(Int a, Int b);

/// A coordinate (xi, eta) of the unbounded event grid underlying every net.
struct Point {
    Int xi = 0;
    Int eta = 0;
    friend auto operator<=>(const Point&, const Point&) = default;
    friend Point operator+(Point a, Point b) { return {a.xi + b.xi, a.eta + b.eta}; }
    friend Point operator-(Point a, Point b) { return {a.xi - b.xi, a.eta - b.eta}; }
};

std::string to_string(Point p); // "(xi,eta)"

/// The four defining parameters of a cycloid.  The quotient lattice is
/// generated by (alpha,-beta) and (gamma,delta); all further structure
/// (area, cycle lengths, processes) derives from these four values.
struct CycloidSpec {
    Int alpha;
    Int beta;
    Int gamma;
    Int delta;

    CycloidSpec(Int a, Int b, Int g, Int d);

    Int area() const { return alpha * delta + beta * gamma; }
    Int n() const { return alpha + beta; }

    /// beta | delta: the net decomposes into beta token-disjoint processes.
    bool regular() const { return delta % beta == 0; }
    bool coregular() const { return gamma % alpha == 0; }

    /// Process length p = area/beta; only meaningful for regular specs.
    Int process_len() const { return area() / beta; }

    // Aliases used by the stop-resilient constructions: c cars, g gaps.
    Int cars() const { return beta; }
    Int gaps() const { return alpha; }

    friend auto operator<=>(const CycloidSpec&, const CycloidSpec&) = default;
};

std::string to_string(const CycloidSpec& spec); // "C(4,3,3,3)"

struct CycloidMetrics {
    Int area = 0;
    Int n = 0;
    Int fwd_cycle_len = 0;
    Int bwd_cycle_len = 0;
    Int fwd_cycle_count = 0;
    Int bwd_cycle_count = 0;
    Int fwd_tokens_per_cycle = 0;
    Int bwd_tokens_per_cycle = 0;
    bool is_regular = false;
    bool is_coregular = false;
    std::optional<Int> process_len;   // p, present iff is_regular
    std::optional<Int> coprocess_len; // p', present iff is_coregular
    Int min_cycle = 0;                // cyc
};

/// Exact rational pair (num1/den, num2/den); den is always the area.
struct ParameterVector {
    Int num1 = 0;
    Int num2 = 0;
    Int den = 1;
    bool integral() const { return num1 % den == 0 && num2 % den == 0; }
};

struct NormalizationWitness {
    Int m = 0;
    Int n_steps = 0;
    Point representative;
};

/// Per-process naming [t_i,a_j] / [s_i,a_j] / [s'_i,a_j] of a regular
/// cycloid: i counts positions along the process, j names the process.
struct RegularCoordinate {
    enum class Kind : std::uint8_t { transition, fwd_place, bwd_place };
    Kind kind = Kind::transition;
    Int i = 0;
    Int j = 0;
    friend auto operator<=>(const RegularCoordinate&, const RegularCoordinate&) = default;
};

std::string to_string(const RegularCoordinate& rc); // "t[i,j]", "s[i,j]", "s'[i,j]"

struct MinimalCycle {
    enum class Source : std::uint8_t { formula_a, formula_b, formula_c, search };
    Int value = 0;
    Source source = Source::search;
};

CycloidMetrics metrics(const CycloidSpec& spec);

/// (1/A) * B * v with B = ((delta,-gamma),(beta,alpha)), kept exact.
ParameterVector parameter_vector(const CycloidSpec& spec, Point v);

/// Two grid points name the same node iff parameter_vector of their
/// difference is integral.
bool equivalent(const CycloidSpec& spec, Point a, Point b);

/// Maps u to the unique equivalent canonical representative via
/// m = floor((u*delta - v*gamma)/A), n = floor((v*alpha + u*beta)/A).
/// Canonical points are exactly the fixed points (m = n_steps = 0).
NormalizationWitness normalize(const CycloidSpec& spec, Point u);

/// C(beta,alpha,delta,gamma); isomorphic to the input.
CycloidSpec dual(const CycloidSpec& spec);

enum class ShearDirection { reduce_gamma, reduce_delta };

/// C(alpha,beta,gamma -+ q*alpha, delta +- q*beta); area-preserving and
/// isomorphic to the input.  Requires gamma > q*alpha resp. delta > q*beta.
CycloidSpec shear(const CycloidSpec& spec, Int q, ShearDirection direction);

/// Length of a shortest directed transition cycle through the origin.
/// Regular specs matching a closed-form case report that formula as the
/// source; everything else falls back to breadth-first search.
MinimalCycle minimal_cycle_length(const CycloidSpec& spec);

/// stand([t_i,a_j]) = canonical representative of (i-j, -j).
Point stand(const CycloidSpec& spec, const RegularCoordinate& rc);

/// Inverse of stand on canonical transition points of a regular spec.
RegularCoordinate regular_label(const CycloidSpec& spec, Point pt);

/// All canonical transition points (normalize fixed points), sorted; the
/// size always equals the area.
std::vector<Point> fundamental_transitions(const CycloidSpec& spec);

} // namespace cycloid
