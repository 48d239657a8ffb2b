// Random corpora shared by unit and acceptance tests.

#ifndef PRIME_TESTS_GENERATORS_HPP
#define PRIME_TESTS_GENERATORS_HPP

#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prime/clustering.hpp"
#include "prime/corpus.hpp"

namespace gen {

inline prime::Stoplists no_stopwords() { return {prime::Stoplist{}, prime::Stoplist{}}; }

// English documents over terms "t0".."t{vocab-1}"; `truth` receives the
// term sequence and character length of each document.
inline prime::Collection random_corpus(std::mt19937_64& rng, std::size_t n_docs, std::size_t vocab,
                                       std::vector<oracle::PlainDoc>& truth) {
  prime::Collection c;
  truth.clear();
  std::uniform_int_distribution<std::size_t> term(0, vocab - 1), title_len(0, 4), abs_len(0, 30);
  for (std::size_t i = 0; i < n_docs; ++i) {
    oracle::PlainDoc t;
    t.id = "D" + std::to_string(100000 + i);
    std::string title, abstract;
    for (std::size_t k = title_len(rng); k > 0; --k) {
      std::string w = "t" + std::to_string(term(rng));
      title += (title.empty() ? "" : " ") + w;
      t.terms.push_back(w);
    }
    for (std::size_t k = abs_len(rng); k > 0; --k) {
      std::string w = "t" + std::to_string(term(rng));
      abstract += (abstract.empty() ? "" : ", ") + w;
      t.terms.push_back(w);
    }
    t.length = title.size() + abstract.size();
    c.docs.push_back({t.id, prime::Lang::En, title, abstract, std::nullopt, std::nullopt, std::nullopt});
    truth.push_back(std::move(t));
  }
  std::shuffle(c.docs.begin(), c.docs.end(), rng);
  return c;
}

// Sparse count vectors over a small vocabulary so that exact similarity
// ties (duplicates, disjoint vectors, empty vectors) actually occur.
inline std::vector<prime::DocVector> random_vectors(std::mt19937_64& rng, std::size_t n) {
  std::vector<prime::DocVector> out;
  std::uniform_int_distribution<int> nterms(0, 4), term(0, 7), freq(1, 3), dup(0, 9);
  for (std::size_t i = 0; i < n; ++i) {
    prime::DocVector v;
    v.doc_id = "d" + std::to_string(1000 + i);
    if (!out.empty() && dup(rng) == 0) {
      v.terms = out[rng() % out.size()].terms;
    } else {
      for (int k = nterms(rng); k > 0; --k) v.terms["w" + std::to_string(term(rng))] += freq(rng);
    }
    out.push_back(std::move(v));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline std::map<std::string, std::map<std::string, int>> as_map(const std::vector<prime::DocVector>& v) {
  std::map<std::string, std::map<std::string, int>> m;
  for (const auto& d : v) m[d.doc_id] = std::map<std::string, int>(d.terms.begin(), d.terms.end());
  return m;
}

}  // namespace gen

#endif  // PRIME_TESTS_GENERATORS_HPP
