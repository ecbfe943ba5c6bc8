#pragma once

#include "hyperrate/hypergraph.hpp"
#include "hyperrate/labelings.hpp"
#include "hyperrate/parallel.hpp"
#include "hyperrate/rational.hpp"
#include "hyperrate/weighted.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyperrate {

// Ordered r-tuple of label values summing to 1.
using LabelTuple = std::vector<Rational>;

// Width function on label values.
using WidthMap = std::map<Rational, double>;

// Closes a tuple set under coordinate permutation; result sorted, unique.
std::vector<LabelTuple> permutation_closure(std::vector<LabelTuple> tuples);

class MixedHubCollection {
public:
    MixedHubCollection() = default;
    // Tuples must sum to 1 and be closed under permutation; c must be
    // nonnegative and cover every nonzero value in the tuples. c(0) = 1 is
    // implied.
    MixedHubCollection(int r, std::vector<LabelTuple> tuples, WidthMap c);

    int uniformity() const noexcept { return r_; }
    const std::vector<LabelTuple>& tuples() const noexcept { return tuples_; }
    const WidthMap& widths() const noexcept { return c_; }
    double c(const Rational& t) const;
    // Nonzero values appearing in the tuples, ascending.
    std::vector<Rational> values() const;
    // Every nonzero entry has positive width.
    bool active(const LabelTuple& t) const;

    MixedHubCollection with_widths(WidthMap c) const { return MixedHubCollection(r_, tuples_, std::move(c)); }

private:
    int r_ = 0;
    std::vector<LabelTuple> tuples_;
    WidthMap c_;
};

// Edge label tuples of the given labelings, with nonzero sum, permutation closed.
std::vector<LabelTuple> tuples_from_labelings(const Hypergraph& h, const std::vector<Labeling>& gamma);

// Sum over ordered tuples of the product of widths.
double volume(const MixedHubCollection& m);

// Labelings whose nonzero-sum edge tuples all lie in the collection's tuple set.
std::vector<Labeling> respecting_labelings(const Hypergraph& h, const std::vector<Labeling>& gamma,
                                           const std::vector<LabelTuple>& tuples);

// Sum over respecting labelings of prod_v c(f(v)); the zero labeling gives 1.
double p_value(const Hypergraph& h, const std::vector<Labeling>& gamma, const MixedHubCollection& m);

// Polynomial in the widths c_t, one exponent per value.
struct Posynomial {
    struct Term {
        std::uint64_t coefficient;
        std::vector<int> exponents;
        auto operator<=>(const Term&) const = default;
    };
    std::vector<Rational> variables;
    std::vector<Term> terms; // sorted by exponents, merged

    double operator()(const std::vector<double>& c) const;
    std::string to_string() const;
};

Posynomial volume_polynomial(const std::vector<LabelTuple>& tuples);
Posynomial p_polynomial(const Hypergraph& h, const std::vector<Labeling>& gamma, const std::vector<LabelTuple>& tuples);

enum class RateMethod { closed_form, optimizer, single_labeling_scan };
std::string to_string(RateMethod m);

struct RateResult {
    double value = 0.0;
    WidthMap certificate;
    RateMethod method = RateMethod::single_labeling_scan;
    double volume = 0.0;  // of the certificate
    double p_value = 0.0; // of the certificate
};

struct RateOptions {
    int starts = 12;
    int iterations = 400;
    std::uint64_t seed = 20240611;
    int threads = default_threads();
    LabelingOptions labeling;
};

// Precomputed data for repeated rate evaluations on one pattern.
class RateProblem {
public:
    explicit RateProblem(const Hypergraph& h, const RateOptions& opts = {});
    RateProblem(const Hypergraph& h, const std::vector<Rational>& allowed_values, const RateOptions& opts = {});

    const Hypergraph& pattern() const noexcept { return h_; }
    const std::vector<Labeling>& labelings() const noexcept { return gamma_; }
    const std::vector<LabelTuple>& tuples() const noexcept { return tuples_; }
    const Posynomial& volume_poly() const noexcept { return vol_; }
    const Posynomial& p_poly() const noexcept { return p_; }

    RateResult solve(double delta) const;
    // Scan phase only.
    RateResult scan(double delta) const;

private:
    void build(const std::optional<std::vector<Rational>>& allowed);
    RateResult polish(double delta) const;
    // Multiplies each c_t by s^t so that P = 1 + delta; returns false if the
    // certificate has no active labeling.
    bool project(std::vector<double>& c, double delta) const;
    RateResult make_result(const std::vector<double>& c, RateMethod method) const;

    Hypergraph h_;
    RateOptions opts_;
    std::vector<Labeling> gamma_;
    std::vector<LabelTuple> tuples_;
    Posynomial vol_;
    Posynomial p_;
    std::vector<std::vector<bool>> supports_; // value sets of nonzero respecting labelings
};

RateResult rho(const Hypergraph& h, double delta, const RateOptions& opts = {});
RateResult rho_restricted(const Hypergraph& h, double delta, const std::vector<Rational>& allowed_values,
                          const RateOptions& opts = {});

// Pattern families with a known rate.
struct ClosedFormKind {
    enum class Family { clique, special3, twograph } family;
    int k = 0;
    int r = 0;
    Hypergraph graph; // twograph only

    static ClosedFormKind clique(int k, int r) { return {Family::clique, k, r, {}}; }
    static ClosedFormKind special3() { return {Family::special3, 6, 3, {}}; }
    static ClosedFormKind twograph(Hypergraph g) { return {Family::twograph, g.vertex_count(), 2, std::move(g)}; }
};

double closed_form_rho(const ClosedFormKind& kind, double delta);

// Recognizes cliques, the alternating octahedron and connected 2-graphs of
// maximum degree at least 2.
std::optional<ClosedFormKind> classify(const Hypergraph& h);

// Independent-set counts by size in the subgraph induced by the maximum
// degree vertices.
std::vector<std::uint64_t> independence_polynomial(const Hypergraph& h2);

// Prefix widths round_half_up(c(t) p^{t Delta} n) for every active value.
std::map<Rational, std::uint64_t> plant_widths(const Hypergraph& h, const MixedHubCollection& m, std::uint64_t n,
                                               double p);

// Widths actually realized after rounding, as a width function.
WidthMap effective_widths(const Hypergraph& h, const MixedHubCollection& m, std::uint64_t n, double p);

// Block model of the union of the collection's mixed hubs.
BlockModel plant(const Hypergraph& h, const MixedHubCollection& m, std::uint64_t n, double p);

} // namespace hyperrate
