#ifndef PRIME_CLUSTERING_HPP
#define PRIME_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prime/corpus.hpp"
#include "prime/error.hpp"

namespace prime {

inline constexpr std::size_t kDefaultClusterCount = 5;

struct DocVector {
  std::string doc_id;
  std::map<std::string, int> terms;  // content word -> frequency

  bool operator==(const DocVector&) const = default;
};

/// Content-word frequency vectors, extracted as for indexing.
inline std::vector<DocVector> vectorize(const std::vector<PatentDoc>& docs, const Stoplists& stop = {}) {
  std::vector<DocVector> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    DocVector v{d.id, {}};
    for (auto& w : doc_terms(d, stop)) ++v.terms[w];
    out.push_back(std::move(v));
  }
  return out;
}

/// Cosine similarity; 0 when either vector is empty.
inline double cosine(const DocVector& a, const DocVector& b) {
  if (a.terms.empty() || b.terms.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, f] : a.terms) na += static_cast<double>(f) * f;
  for (const auto& [t, f] : b.terms) nb += static_cast<double>(f) * f;
  auto i = a.terms.begin();
  auto j = b.terms.begin();
  while (i != a.terms.end() && j != b.terms.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dot += static_cast<double>(i->second) * j->second;
      ++i;
      ++j;
    }
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Leaves are numbered 0..n-1 in doc id order; merge i creates node n+i.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double similarity = 0.0;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
};

struct Cluster {
  std::size_t id = 0;
  std::vector<std::string> members;  // sorted
  std::string centroid;

  bool operator==(const Cluster&) const = default;
};

struct ClusterSet {
  std::vector<Cluster> clusters;  // ordered by smallest member id

  std::size_t doc_count() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.members.size();
    return n;
  }
  const Cluster* find(std::size_t id) const {
    for (const auto& c : clusters)
      if (c.id == id) return &c;
    return nullptr;
  }
  bool operator==(const ClusterSet&) const = default;
};

struct ClusterResult {
  Dendrogram dendrogram;
  ClusterSet clusters;
};

namespace detail {
inline constexpr double kSimTieEps = 1e-12;

inline std::vector<std::vector<double>> similarity_matrix(const std::vector<const DocVector*>& v) {
  const std::size_t n = v.size();
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    sim[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) sim[i][j] = sim[j][i] = cosine(*v[i], *v[j]);
  }
  return sim;
}
}  // namespace detail

/// Member with the largest summed similarity to its co-members; ties go to
/// the smallest doc id. `members` are leaf indices in doc id order.
inline std::size_t select_centroid(const std::vector<std::size_t>& members, const std::vector<std::vector<double>>& sim) {
  std::vector<double> sums;
  for (std::size_t m : members) {
    double s = 0.0;
    for (std::size_t o : members)
      if (o != m) s += sim[m][o];
    sums.push_back(s);
  }
  const double top = *std::max_element(sums.begin(), sums.end());
  std::size_t best = members.front();
  bool found = false;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (sums[i] >= top - detail::kSimTieEps && (!found || members[i] < best)) {
      best = members[i];
      found = true;
    }
  return best;
}

/// Bottom-up group-average clustering on cosine similarity. The hierarchy
/// is built to a single root and cut after n - k merges.
inline ClusterResult cluster(const std::vector<DocVector>& vectors, std::size_t k) {
  const std::size_t n = vectors.size();
  if (k < 1 || k > n) throw Error("cluster: k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

  std::vector<const DocVector*> sorted;
  for (const auto& v : vectors) sorted.push_back(&v);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->doc_id < b->doc_id; });
  for (std::size_t i = 1; i < n; ++i)
    if (sorted[i]->doc_id == sorted[i - 1]->doc_id) throw Error("cluster: duplicate doc id " + sorted[i]->doc_id);

  const auto sim = detail::similarity_matrix(sorted);

  ClusterResult res;
  for (const auto* v : sorted) res.dendrogram.leaves.push_back(v->doc_id);

  // Active clusters: node id, smallest leaf, size; pair sums of similarity.
  struct Active {
    std::size_t node;
    std::size_t min_leaf;
    std::size_t size;
  };
  std::vector<Active> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, i, 1});
  std::vector<std::vector<double>> sum = sim;

  std::vector<std::size_t> parent(2 * n, 0);
  std::iota(parent.begin(), parent.end(), 0);

  while (active.size() > 1) {
    double best = -1.0;
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j)
        best = std::max(best, sum[i][j] / static_cast<double>(active[i].size * active[j].size));
    std::size_t bi = 0, bj = 1;
    std::pair<std::size_t, std::size_t> best_key{n, n};
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double avg = sum[i][j] / static_cast<double>(active[i].size * active[j].size);
        const std::pair<std::size_t, std::size_t> key = std::minmax(active[i].min_leaf, active[j].min_leaf);
        if (avg >= best - detail::kSimTieEps && key < best_key) {
          bi = i;
          bj = j;
          best_key = key;
        }
      }
    }
    const double chosen = sum[bi][bj] / static_cast<double>(active[bi].size * active[bj].size);
    const std::size_t node = n + res.dendrogram.merges.size();
    std::size_t left = active[bi].node, right = active[bj].node;
    if (active[bj].min_leaf < active[bi].min_leaf) std::swap(left, right);
    res.dendrogram.merges.push_back({left, right, chosen});

    for (std::size_t x = 0; x < active.size(); ++x) {
      sum[bi][x] += sum[bj][x];
      sum[x][bi] = sum[bi][x];
    }
    active[bi] = {node, std::min(active[bi].min_leaf, active[bj].min_leaf), active[bi].size + active[bj].size};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    sum.erase(sum.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : sum) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  // Cut: apply the first n - k merges with a union-find over nodes.
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t m = 0; m < n - k; ++m) {
    const auto& mg = res.dendrogram.merges[m];
    parent[find(mg.left)] = n + m;
    parent[find(mg.right)] = n + m;
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [root, members] : groups) ordered.push_back(std::move(members));
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t c = 0; c < ordered.size(); ++c) {
    Cluster cl;
    cl.id = c;
    for (std::size_t leaf : ordered[c]) cl.members.push_back(sorted[leaf]->doc_id);
    cl.centroid = sorted[select_centroid(ordered[c], sim)]->doc_id;
    res.clusters.clusters.push_back(std::move(cl));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Interactive sessions

struct DiscardStep {
  std::vector<std::size_t> kept;              // cluster ids kept
  std::vector<std::string> discarded;         // doc ids removed
  std::size_t k = 0;                          // new cluster count
};

struct Session {
  std::string id;
  std::vector<DocVector> docs;
  ClusterSet clusters;
  std::vector<DiscardStep> history;

  std::set<std::string> doc_ids() const {
    std::set<std::string> out;
    for (const auto& d : docs) out.insert(d.doc_id);
    return out;
  }
};

inline Session start_session(std::string id, std::vector<DocVector> docs, std::size_t k) {
  Session s;
  s.id = std::move(id);
  s.docs = std::move(docs);
  if (!s.docs.empty()) s.clusters = cluster(s.docs, k).clusters;
  return s;
}

/// Keeps the members of the listed clusters and clusters them again into k.
inline Session recluster(const Session& session, const std::vector<std::size_t>& keep, std::size_t k) {
  if (keep.empty()) throw Error("recluster: keep list is empty");
  std::set<std::string> kept_docs;
  std::set<std::size_t> kept_ids;
  for (std::size_t cid : keep) {
    const Cluster* c = session.clusters.find(cid);
    if (!c) throw Error("recluster: unknown cluster id " + std::to_string(cid));
    kept_ids.insert(cid);
    kept_docs.insert(c->members.begin(), c->members.end());
  }
  if (k < 1 || k > kept_docs.size())
    throw Error("recluster: k=" + std::to_string(k) + " outside [1, " + std::to_string(kept_docs.size()) + "]");

  Session next;
  next.id = session.id;
  next.history = session.history;
  DiscardStep step;
  step.kept.assign(kept_ids.begin(), kept_ids.end());
  step.k = k;
  for (const auto& d : session.docs) {
    if (kept_docs.count(d.doc_id))
      next.docs.push_back(d);
    else
      step.discarded.push_back(d.doc_id);
  }
  std::sort(step.discarded.begin(), step.discarded.end());
  next.history.push_back(std::move(step));
  next.clusters = cluster(next.docs, k).clusters;
  return next;
}

}  // namespace prime

#endif  // PRIME_CLUSTERING_HPP
