#pragma once

// Chains in the divisor graph (a | b or b | a) and in the lcm graph on
// [1, x] (lcm(a, b) <= x), plus the decomposition of a chain into its
// maximal runs outside A(x).

#include <algorithm>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "divgraph/arith.hpp"
#include "divgraph/ss_sets.hpp"

namespace divgraph {

enum class RelationKind { divisor, lcm_bounded };

struct Relation {
    RelationKind kind = RelationKind::divisor;
    u64 bound = 0;  // only meaningful for lcm_bounded

    static constexpr Relation divisor() { return {RelationKind::divisor, 0}; }
    static constexpr Relation lcm_bounded(u64 x) { return {RelationKind::lcm_bounded, x}; }

    friend bool operator==(const Relation&, const Relation&) = default;
};

inline bool related_f(u64 a, u64 b) {
    if (a == 0 || b == 0) throw std::domain_error("related_f: arguments must be >= 1");
    return a % b == 0 || b % a == 0;
}

/// lcm(a, b) <= x. Throws OverflowError rather than wrapping.
inline bool related_g(u64 a, u64 b, u64 x) {
    if (a == 0 || b == 0) throw std::domain_error("related_g: arguments must be >= 1");
    if (a > x || b > x) throw std::domain_error("related_g: arguments must be <= x");
    return checked_lcm(a, b) <= x;
}

inline bool related(const Relation& r, u64 a, u64 b) {
    return r.kind == RelationKind::divisor ? related_f(a, b) : related_g(a, b, r.bound);
}

/// An ordered sequence of positive integers tagged with its relation.
/// Validity is checked by validate_chain, not on construction, so that
/// broken inputs can be reported.
class Chain {
public:
    Chain() = default;
    explicit Chain(std::vector<u64> elements, Relation relation = Relation::divisor())
        : elements_(std::move(elements)), relation_(relation) {}

    std::span<const u64> elements() const { return elements_; }
    const Relation& relation() const { return relation_; }
    std::size_t length() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    u64 operator[](std::size_t i) const { return elements_[i]; }
    u64 front() const { return elements_.front(); }
    u64 back() const { return elements_.back(); }

    /// Elements [first, first + count).
    std::span<const u64> window(std::size_t first, std::size_t count) const {
        if (first + count > elements_.size()) throw std::out_of_range("Chain::window out of range");
        return std::span<const u64>(elements_).subspan(first, count);
    }

    Chain slice(std::size_t first, std::size_t count) const {
        const auto w = window(first, count);
        return Chain(std::vector<u64>(w.begin(), w.end()), relation_);
    }

    /// b * C, used to lift packings of [1, x/b] into multiples of b.
    Chain scaled(u64 factor) const {
        std::vector<u64> out;
        out.reserve(elements_.size());
        for (u64 e : elements_) out.push_back(checked_mul(e, factor));
        return Chain(std::move(out), relation_);
    }

    friend bool operator==(const Chain&, const Chain&) = default;

private:
    std::vector<u64> elements_;
    Relation relation_;
};

enum class ViolationKind { none, zero_element, duplicate, unrelated_pair, bound_exceeded };

struct ChainCheck {
    ViolationKind kind = ViolationKind::none;
    std::size_t index = 0;  // first offending position
    std::string message;

    bool ok() const { return kind == ViolationKind::none; }
    explicit operator bool() const { return ok(); }
};

inline ChainCheck validate_chain(const Chain& c) {
    const auto el = c.elements();
    const Relation& rel = c.relation();
    std::unordered_set<u64> seen;
    seen.reserve(el.size());
    for (std::size_t i = 0; i < el.size(); ++i) {
        if (el[i] == 0) return {ViolationKind::zero_element, i, "element 0 at index " + std::to_string(i)};
        if (rel.kind == RelationKind::lcm_bounded && el[i] > rel.bound) {
            return {ViolationKind::bound_exceeded, i,
                    std::to_string(el[i]) + " exceeds bound " + std::to_string(rel.bound) + " at index " +
                        std::to_string(i)};
        }
        if (!seen.insert(el[i]).second) {
            return {ViolationKind::duplicate, i, "duplicate " + std::to_string(el[i]) + " at index " + std::to_string(i)};
        }
    }
    for (std::size_t i = 0; i + 1 < el.size(); ++i) {
        bool ok = false;
        try {
            ok = related(rel, el[i], el[i + 1]);
        } catch (const OverflowError&) {
            ok = false;
        }
        if (!ok) {
            return {ViolationKind::unrelated_pair, i,
                    std::to_string(el[i]) + " and " + std::to_string(el[i + 1]) + " unrelated at index " +
                        std::to_string(i)};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Components

struct Component {
    std::size_t first = 0;  // inclusive
    std::size_t last = 0;   // inclusive
    u64 label = 0;          // the element of B(x) dividing the whole run

    friend bool operator==(const Component&, const Component&) = default;
};

struct ComponentDecomposition {
    u64 x = 0;
    std::vector<Component> components;
};

/// Maximal runs of positions whose elements lie outside A(x). Each run is
/// labelled with unique_b_divisor of its first element; the label is then
/// checked against every element of the run and a failure throws
/// std::logic_error.
inline ComponentDecomposition decompose_components(const Chain& c, u64 x, const Sieve& sieve = Sieve::shared()) {
    ComponentDecomposition out{x, {}};
    const auto el = c.elements();
    std::size_t i = 0;
    while (i < el.size()) {
        if (el[i] == 0 || el[i] > x) throw std::domain_error("decompose_components: element outside [1, x]");
        if (in_A(el[i], x, sieve)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < el.size() && el[j + 1] <= x && el[j + 1] != 0 && !in_A(el[j + 1], x, sieve)) ++j;
        const u64 label = unique_b_divisor(el[i], x, sieve);
        for (std::size_t k = i; k <= j; ++k) {
            if (el[k] % label != 0) {
                throw std::logic_error("component label " + std::to_string(label) + " does not divide " +
                                       std::to_string(el[k]));
            }
        }
        out.components.push_back({i, j, label});
        i = j + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text format
//
//   relation divisor            or   relation lcm <x>
//   # free-form comment lines
//   3 1 2 4                     one chain per line

struct ChainFile {
    Relation relation;
    std::vector<Chain> chains;
    std::vector<std::string> comments;
};

inline void write_chains(std::ostream& os, const Relation& relation, std::span<const Chain> chains,
                         std::span<const std::string> comments = {}) {
    if (relation.kind == RelationKind::divisor) {
        os << "relation divisor\n";
    } else {
        os << "relation lcm " << relation.bound << '\n';
    }
    for (const auto& c : comments) os << "# " << c << '\n';
    for (const Chain& chain : chains) {
        const auto el = chain.elements();
        for (std::size_t i = 0; i < el.size(); ++i) os << (i ? " " : "") << el[i];
        os << '\n';
    }
}

inline ChainFile read_chains(std::istream& is) {
    ChainFile out;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            out.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag, kind;
            ls >> tag >> kind;
            if (tag != "relation") throw std::runtime_error("chain file: missing 'relation' header");
            if (kind == "divisor") {
                out.relation = Relation::divisor();
            } else if (kind == "lcm") {
                u64 bound = 0;
                if (!(ls >> bound) || bound == 0) throw std::runtime_error("chain file: lcm relation needs a bound");
                out.relation = Relation::lcm_bounded(bound);
            } else {
                throw std::runtime_error("chain file: unknown relation '" + kind + "'");
            }
            have_header = true;
            continue;
        }
        std::vector<u64> elements;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            u64 v = 0;
            try {
                v = std::stoull(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || tok.front() == '-') throw std::runtime_error("chain file: bad element '" + tok + "'");
            elements.push_back(v);
        }
        out.chains.emplace_back(std::move(elements), out.relation);
    }
    if (!have_header) throw std::runtime_error("chain file: empty input");
    return out;
}

}  // namespace divgraph
