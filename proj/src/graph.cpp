#include "cpps/graph.hpp"

#include <algorithm>

namespace cpps {

bool StaticGraph::insert(Triple triple) {
    auto [it, inserted] = index_.insert(triple);
    if (!inserted) return false;
    std::size_t id = triples_.size();
    by_subject_[triple.subject].push_back(id);
    by_predicate_[triple.predicate].push_back(id);
    by_object_[triple.object].push_back(id);
    triples_.push_back(std::move(triple));
    return true;
}

void StaticGraph::insert_all(const std::vector<Triple>& triples) {
    for (const auto& t : triples) insert(t);
}

std::vector<const Triple*> StaticGraph::candidates(const Term& s, const Term& p,
                                                   const Term& o) const {
    const std::vector<std::size_t>* best = nullptr;
    auto consider = [&](const std::map<Term, std::vector<std::size_t>>& index, const Term& key) {
        auto it = index.find(key);
        const std::vector<std::size_t>* bucket = it == index.end() ? nullptr : &it->second;
        static const std::vector<std::size_t> kEmpty;
        if (bucket == nullptr) bucket = &kEmpty;
        if (best == nullptr || bucket->size() < best->size()) best = bucket;
    };
    if (!s.is_variable()) consider(by_subject_, s);
    if (!p.is_variable()) consider(by_predicate_, p);
    if (!o.is_variable()) consider(by_object_, o);

    std::vector<const Triple*> out;
    if (best == nullptr) {
        out.reserve(triples_.size());
        for (const auto& t : triples_) out.push_back(&t);
    } else {
        out.reserve(best->size());
        for (std::size_t id : *best) out.push_back(&triples_[id]);
    }
    return out;
}

bool unify(const TriplePattern& pattern, const Triple& triple, Bindings& row) {
    auto position = [&row](const Term& pattern_term, const Term& actual) {
        if (!pattern_term.is_variable()) return pattern_term == actual;
        auto [it, inserted] = row.emplace(pattern_term.text(), actual);
        return inserted || it->second == actual;
    };
    return position(pattern.subject, triple.subject) &&
           position(pattern.predicate, triple.predicate) &&
           position(pattern.object, triple.object);
}

bool binding_less(const Bindings& a, const Bindings& b) {
    return a < b;
}

std::vector<Bindings> StaticGraph::match(const TriplePattern& pattern,
                                         const Bindings& seed) const {
    // Substitute the seed before consulting indexes.
    auto resolve = [&seed](const Term& t) {
        if (t.is_variable()) {
            auto it = seed.find(t.text());
            if (it != seed.end()) return it->second;
        }
        return t;
    };
    Term s = resolve(pattern.subject);
    Term p = resolve(pattern.predicate);
    Term o = resolve(pattern.object);

    std::vector<Bindings> out;
    for (const Triple* t : candidates(s, p, o)) {
        Bindings row = seed;
        if (unify(TriplePattern{s, p, o}, *t, row)) out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end(), binding_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Bindings> match_pattern(const StaticGraph& graph, const TriplePattern& pattern,
                                    const Bindings& seed) {
    return graph.match(pattern, seed);
}

} // namespace cpps
