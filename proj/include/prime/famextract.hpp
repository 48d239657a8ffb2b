#ifndef PRIME_FAMEXTRACT_HPP
#define PRIME_FAMEXTRACT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/lexicon.hpp"
#include "prime/text.hpp"

namespace prime {

/// One aligned field of a family pair: the co-occurrence window.
struct Fragment {
  Field field = Field::Abstract;
  std::vector<std::string> ja;  // phrase texts
  std::vector<std::string> en;
};

struct FamilyPair {
  std::string family_id;
  std::string ja_id;
  std::string en_id;
  std::array<Fragment, 2> fragments;  // title, abstract
};

struct TranslationHypothesis {
  std::string ja;
  std::string en;
  int64_t f_j = 0;
  int64_t f_e = 0;
  int64_t f_je = 0;
  double score = 0.0;

  bool operator==(const TranslationHypothesis&) const = default;
};

/// Weighted Dice coefficient: ln(f_je) * 2 f_je / (f_j + f_e).
inline double weighted_dice(int64_t f_je, int64_t f_j, int64_t f_e) {
  if (f_je < 1 || f_j < 1 || f_e < 1) throw Error("weighted_dice: frequencies must be >= 1");
  return std::log(static_cast<double>(f_je)) * (2.0 * static_cast<double>(f_je)) /
         static_cast<double>(f_j + f_e);
}

namespace detail {
inline std::vector<std::string> phrase_texts(const PatentDoc& d, Field f, const Stoplists& stop, std::size_t max_len) {
  std::vector<std::string> out;
  for (const auto& p : chunk_phrases(field_tokens(d, f, stop), f, max_len)) out.push_back(p.text());
  return out;
}
}  // namespace detail

/// Pairs ja and en documents sharing a family id (one pair per id present
/// on both sides). Ids that occur more than once on either side are
/// ambiguous and skipped; a warning is appended for each.
inline std::vector<FamilyPair> pair_families(const Collection& ja, const Collection& en, const Stoplists& stop = {},
                                             std::size_t max_len = kDefaultMaxPhraseLen,
                                             std::vector<std::string>* warnings = nullptr) {
  auto group = [](const Collection& c, Lang lang) {
    std::map<std::string, std::vector<const PatentDoc*>> out;
    for (const auto& d : c.docs)
      if (d.lang == lang && d.family_id && !d.family_id->empty()) out[*d.family_id].push_back(&d);
    return out;
  };
  const auto ja_fam = group(ja, Lang::Ja);
  const auto en_fam = group(en, Lang::En);
  std::vector<FamilyPair> pairs;
  for (const auto& [fid, jdocs] : ja_fam) {
    auto it = en_fam.find(fid);
    if (it == en_fam.end()) continue;
    const auto& edocs = it->second;
    if (jdocs.size() > 1 || edocs.size() > 1) {
      if (warnings)
        warnings->push_back("ambiguous family " + fid + ": " + std::to_string(jdocs.size()) + " ja / " +
                            std::to_string(edocs.size()) + " en documents; skipped");
      continue;
    }
    FamilyPair p;
    p.family_id = fid;
    p.ja_id = jdocs.front()->id;
    p.en_id = edocs.front()->id;
    for (std::size_t i = 0; i < kFields.size(); ++i) {
      p.fragments[i].field = kFields[i];
      p.fragments[i].ja = detail::phrase_texts(*jdocs.front(), kFields[i], stop, max_len);
      p.fragments[i].en = detail::phrase_texts(*edocs.front(), kFields[i], stop, max_len);
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

namespace detail {
struct CooccurrenceCounts {
  std::unordered_map<std::string, int64_t> ja;
  std::unordered_map<std::string, int64_t> en;
  std::unordered_map<std::string, int64_t> joint;  // "ja\ten"

  void add(const Fragment& f) {
    const std::set<std::string> js(f.ja.begin(), f.ja.end());
    const std::set<std::string> es(f.en.begin(), f.en.end());
    for (const auto& j : js) ++ja[j];
    for (const auto& e : es) ++en[e];
    for (const auto& j : js)
      for (const auto& e : es) ++joint[j + '\t' + e];
  }
  void merge(const CooccurrenceCounts& o) {
    for (const auto& [k, v] : o.ja) ja[k] += v;
    for (const auto& [k, v] : o.en) en[k] += v;
    for (const auto& [k, v] : o.joint) joint[k] += v;
  }
};
}  // namespace detail

/// Canonical hypothesis order: score descending, then (ja, en).
inline bool hypothesis_before(const TranslationHypothesis& a, const TranslationHypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.ja != b.ja) return a.ja < b.ja;
  return a.en < b.en;
}

/// Counts, per fragment, which phrases occur (presence, not multiplicity)
/// and scores every co-occurring (ja, en) phrase pair. Counting is split
/// over `threads` workers; the result does not depend on the split.
inline std::vector<TranslationHypothesis> extract(const std::vector<FamilyPair>& pairs, unsigned threads = 1) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(pairs.size(), 1))));
  std::vector<detail::CooccurrenceCounts> parts(threads);
  auto work = [&](unsigned t) {
    for (std::size_t i = t; i < pairs.size(); i += threads)
      for (const auto& f : pairs[i].fragments) parts[t].add(f);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (unsigned t = 1; t < threads; ++t) parts[0].merge(parts[t]);
  const auto& counts = parts[0];

  std::vector<TranslationHypothesis> out;
  out.reserve(counts.joint.size());
  for (const auto& [key, fje] : counts.joint) {
    const auto tab = key.find('\t');
    TranslationHypothesis h;
    h.ja = key.substr(0, tab);
    h.en = key.substr(tab + 1);
    h.f_j = counts.ja.at(h.ja);
    h.f_e = counts.en.at(h.en);
    h.f_je = fje;
    h.score = weighted_dice(h.f_je, h.f_j, h.f_e);
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(), hypothesis_before);
  return out;
}

/// Hypotheses with score strictly above `threshold`, order preserved.
inline std::vector<TranslationHypothesis> filter_threshold(const std::vector<TranslationHypothesis>& hyps,
                                                           double threshold) {
  if (!(threshold >= 0.0)) throw Error("filter_threshold: threshold must be >= 0");
  std::vector<TranslationHypothesis> out;
  for (const auto& h : hyps)
    if (h.score > threshold) out.push_back(h);
  return out;
}

// ---------------------------------------------------------------------------
// Hypothesis files: W_j, W_e, F_j, F_e, F_je, score [, verdict]

inline constexpr const char* kHypothesisHeader = "#W_j\tW_e\tF_j\tF_e\tF_je\tscore";

inline void write_hypotheses(std::ostream& out, const std::vector<TranslationHypothesis>& hyps) {
  out << kHypothesisHeader << '\n';
  for (const auto& h : hyps)
    out << h.ja << '\t' << h.en << '\t' << h.f_j << '\t' << h.f_e << '\t' << h.f_je << '\t'
        << text::format_double(h.score) << '\n';
}

namespace detail {
inline TranslationHypothesis parse_hypothesis_cols(const std::vector<std::string>& c, const std::string& src,
                                                   std::size_t lineno) {
  TranslationHypothesis h;
  h.ja = c[0];
  h.en = c[1];
  if (h.ja.empty() || h.en.empty()) throw ParseError(src, lineno, "empty phrase");
  if (!text::parse_int(c[2], h.f_j) || !text::parse_int(c[3], h.f_e) || !text::parse_int(c[4], h.f_je) ||
      !text::parse_double(c[5], h.score))
    throw ParseError(src, lineno, "non-numeric frequency or score");
  if (h.f_j < 1 || h.f_e < 1 || h.f_je < 1 || h.f_je > std::min(h.f_j, h.f_e))
    throw ParseError(src, lineno, "frequencies violate 1 <= F_je <= min(F_j, F_e)");
  return h;
}
}  // namespace detail

inline std::vector<TranslationHypothesis> read_hypotheses(std::istream& in, const std::string& src = "<hyps>") {
  std::vector<TranslationHypothesis> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    text::chomp(line);
    if (line.empty() || line[0] == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 6) throw ParseError(src, lineno, "expected 6 tab-separated columns");
    out.push_back(detail::parse_hypothesis_cols(cols, src, lineno));
  }
  return out;
}

inline void save_hypotheses(const std::string& path, const std::vector<TranslationHypothesis>& hyps) {
  auto out = text::open_out(path);
  write_hypotheses(out, hyps);
}

inline std::vector<TranslationHypothesis> load_hypotheses(const std::string& path) {
  auto in = text::open_in(path);
  return read_hypotheses(in, path);
}

// ---------------------------------------------------------------------------
// Manual judgement workflow

enum class Verdict { Correct, Incorrect };

struct JudgedTranslation {
  std::string ja;
  std::string en;
  int64_t f_je = 0;
  Verdict verdict = Verdict::Incorrect;
};

/// Writes hypotheses with an empty trailing verdict column for annotators.
inline void export_for_judgement(std::ostream& out, const std::vector<TranslationHypothesis>& hyps) {
  if (hyps.empty()) throw Error("export_for_judgement: nothing to export");
  out << kHypothesisHeader << "\tverdict\n";
  for (const auto& h : hyps)
    out << h.ja << '\t' << h.en << '\t' << h.f_j << '\t' << h.f_e << '\t' << h.f_je << '\t'
        << text::format_double(h.score) << "\t\n";
}

inline void export_for_judgement(const std::string& path, const std::vector<TranslationHypothesis>& hyps) {
  if (hyps.empty()) throw Error("export_for_judgement: nothing to export");
  auto out = text::open_out(path);
  export_for_judgement(out, hyps);
}

/// Reads a judged file. Every row needs a verdict of "correct" or
/// "incorrect"; a (W_j, W_e) pair may appear once.
inline std::vector<JudgedTranslation> import_judged(std::istream& in, const std::string& src = "<judged>") {
  std::vector<JudgedTranslation> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    text::chomp(line);
    if (line.empty() || line[0] == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() != 7) throw ParseError(src, lineno, "expected 7 tab-separated columns");
    const auto h = detail::parse_hypothesis_cols(cols, src, lineno);
    const std::string v{text::trim(cols[6])};
    JudgedTranslation j{h.ja, h.en, h.f_je, Verdict::Incorrect};
    if (v == "correct")
      j.verdict = Verdict::Correct;
    else if (v != "incorrect")
      throw ParseError(src, lineno, "verdict must be \"correct\" or \"incorrect\", got \"" + v + "\"");
    if (!seen.emplace(j.ja, j.en).second)
      throw ParseError(src, lineno, "duplicate pair \"" + j.ja + "\" / \"" + j.en + "\"");
    out.push_back(std::move(j));
  }
  return out;
}

inline std::vector<JudgedTranslation> import_judged(const std::string& path) {
  auto in = text::open_in(path);
  return import_judged(in, path);
}

/// Correct judgements as ja->en lexicon entries with freq = F_je.
inline std::vector<LexiconEntry> to_lexicon_entries(const std::vector<JudgedTranslation>& judged) {
  std::vector<LexiconEntry> out;
  for (const auto& j : judged)
    if (j.verdict == Verdict::Correct) out.push_back({j.ja, j.en, j.f_je});
  return out;
}

struct AccuracyRow {
  double threshold = 0.0;
  std::size_t count = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy;  // percent; empty when count == 0
};

/// Per threshold: hypotheses scoring above it, how many were judged
/// correct, and their ratio. Unjudged hypotheses count as not correct.
inline std::vector<AccuracyRow> accuracy_report(const std::vector<TranslationHypothesis>& hyps,
                                                const std::vector<JudgedTranslation>& judged,
                                                const std::vector<double>& thresholds) {
  std::set<std::pair<std::string, std::string>> correct;
  for (const auto& j : judged)
    if (j.verdict == Verdict::Correct) correct.emplace(j.ja, j.en);
  std::vector<AccuracyRow> rows;
  for (double t : thresholds) {
    AccuracyRow r;
    r.threshold = t;
    for (const auto& h : hyps) {
      if (!(h.score > t)) continue;
      ++r.count;
      r.correct += correct.count({h.ja, h.en});
    }
    if (r.count) r.accuracy = 100.0 * static_cast<double>(r.correct) / static_cast<double>(r.count);
    rows.push_back(r);
  }
  return rows;
}

/// Renders rows in the threshold-by-column layout.
inline std::string render_accuracy_table(const std::vector<AccuracyRow>& rows) {
  auto cell = [](const std::string& s) {
    const std::size_t width = unicode::length(s);
    return std::string(width < 10 ? 10 - width : 0, ' ') + s;
  };
  auto fixed = [](double v, int prec) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(prec) << v;
    return o.str();
  };
  std::ostringstream out;
  out << std::left << std::setw(28) << "Threshold for Score" << std::right;
  for (const auto& r : rows) out << cell(fixed(r.threshold, 1));
  out << '\n' << std::left << std::setw(28) << "# of Translations" << std::right;
  for (const auto& r : rows) out << cell(std::to_string(r.count));
  out << '\n' << std::left << std::setw(28) << "# of Correct Translations" << std::right;
  for (const auto& r : rows) out << cell(std::to_string(r.correct));
  out << '\n' << std::left << std::setw(28) << "Accuracy (%)" << std::right;
  for (const auto& r : rows) out << cell(r.accuracy ? fixed(*r.accuracy, 1) : "—");
  out << '\n';
  return out.str();
}

}  // namespace prime

#endif  // PRIME_FAMEXTRACT_HPP
