#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpps/term.hpp"

namespace cpps {

/// Solution mapping: variable name -> bound term. std::map keeps variables
/// in a stable order for serialization and comparison.
using Bindings = std::map<std::string, Term>;

/// In-memory triple set with per-position indexes. Set semantics: duplicate
/// inserts are no-ops and pattern matching yields each distinct binding once.
/// Read-mostly: concurrent reads are safe once construction is done.
class StaticGraph {
public:
    /// Returns false when the triple was already present.
    bool insert(Triple triple);
    void insert_all(const std::vector<Triple>& triples);

    std::size_t size() const { return triples_.size(); }
    bool contains(const Triple& triple) const { return index_.count(triple) > 0; }
    const std::vector<Triple>& triples() const { return triples_; }

    /// All extensions of `seed` that make `pattern` a triple of this graph,
    /// sorted by the lexical form of the bound terms.
    std::vector<Bindings> match(const TriplePattern& pattern, const Bindings& seed = {}) const;

    /// Candidate triples for a pattern after seed substitution; exact
    /// supersets chosen via the smallest applicable index.
    std::vector<const Triple*> candidates(const Term& s, const Term& p, const Term& o) const;

    friend bool operator==(const StaticGraph& a, const StaticGraph& b) {
        return a.index_ == b.index_;
    }

private:
    std::vector<Triple> triples_;
    std::set<Triple> index_;
    std::map<Term, std::vector<std::size_t>> by_subject_;
    std::map<Term, std::vector<std::size_t>> by_predicate_;
    std::map<Term, std::vector<std::size_t>> by_object_;
};

/// match over an explicit seed, as a free function.
std::vector<Bindings> match_pattern(const StaticGraph& graph, const TriplePattern& pattern,
                                    const Bindings& seed = {});

/// Attempts to extend `row` so that `pattern` maps onto `triple`; returns
/// false on any mismatch (ground position or conflicting variable binding).
bool unify(const TriplePattern& pattern, const Triple& triple, Bindings& row);

/// Stable content ordering for rows of bindings.
bool binding_less(const Bindings& a, const Bindings& b);

} // namespace cpps
