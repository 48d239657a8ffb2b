// prime: command-line front end for indexing, search, query translation,
// lexicon extraction and the HTTP server.

#include <csignal>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "prime/config.hpp"
#include "prime/corpus.hpp"
#include "prime/engine.hpp"
#include "prime/famextract.hpp"
#include "prime/langmodel.hpp"
#include "prime/lexicon.hpp"
#include "prime/querytrans.hpp"
#include "prime/retrieval.hpp"
#include "prime/server.hpp"
#include "prime/synthetic.hpp"

namespace fs = std::filesystem;
using namespace prime;

namespace {

const std::map<std::string, Lang> kLangMap{{"ja", Lang::Ja}, {"en", Lang::En}};
const std::map<std::string, Direction> kDirMap{{"ja-en", Direction::JaEn}, {"en-ja", Direction::EnJa}};

struct StopPaths {
  std::string ja, en;
};

Stoplists load_stoplists(const StopPaths& p) {
  Stoplists s;
  if (!p.ja.empty()) s.ja = Stoplist::load(p.ja);
  if (!p.en.empty()) s.en = Stoplist::load(p.en);
  return s;
}

void add_stop_options(CLI::App* cmd, StopPaths& p) {
  cmd->add_option("--stoplist-ja", p.ja, "Japanese stoplist file")->check(CLI::ExistingFile);
  cmd->add_option("--stoplist-en", p.en, "English stoplist file")->check(CLI::ExistingFile);
}

// An index directory also holds the documents it was built from.
Collection index_docs(const std::string& dir) { return load_collection((fs::path(dir) / "docs.jsonl").string()); }

BigramLM load_or_train_lm(const std::vector<std::string>& paths, Lang lang, const Collection& fallback, double lambda,
                          const Stoplists& stop) {
  for (const auto& p : paths) {
    auto lm = BigramLM::load(p);
    if (lm.lang() == lang) return lm;
  }
  return BigramLM::train(fallback, lang, {lambda, true}, stop);
}

void print_candidates(const std::vector<TranslationCandidate>& cands) {
  std::cout << "rank\ttotal\tlm_logprob\ttm_logprob\ttranslation\n";
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    std::cout << i + 1 << '\t' << std::fixed << std::setprecision(4) << c.total << '\t' << c.lm_logprob << '\t'
              << c.tm_logprob << '\t' << c.text() << '\n';
  }
}

std::vector<double> parse_thresholds(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : text::split(s, ',')) {
    double v = 0;
    if (!text::parse_double(text::trim(part), v)) throw Error("bad threshold \"" + part + "\"");
    out.push_back(v);
  }
  return out;
}

httplib::Server* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Japanese/English patent retrieval"};
  app.require_subcommand(1);

  // index
  std::string corpus, out_dir, lang_s = "en";
  StopPaths stop_paths;
  auto* index = app.add_subcommand("index", "Build an inverted index for one language");
  index->add_option("--corpus", corpus, "JSON Lines collection")->required()->check(CLI::ExistingFile);
  index->add_option("--lang", lang_s)->required()->check(CLI::IsMember({"ja", "en"}));
  index->add_option("--out", out_dir, "Output directory")->required();
  add_stop_options(index, stop_paths);

  // search
  std::string ja_index, en_index, query, lexicon_path;
  std::vector<std::string> lm_paths;
  std::size_t k = 20;
  auto* search = app.add_subcommand("search", "Bilingual search from the command line");
  search->add_option("--ja-index", ja_index)->required()->check(CLI::ExistingDirectory);
  search->add_option("--en-index", en_index)->required()->check(CLI::ExistingDirectory);
  search->add_option("--query", query)->required();
  search->add_option("--lang", lang_s)->check(CLI::IsMember({"ja", "en"}));
  search->add_option("--k", k)->check(CLI::PositiveNumber);
  search->add_option("--lexicon", lexicon_path, "Query translation lexicon")->check(CLI::ExistingFile);
  search->add_option("--lm", lm_paths, "Language model file (repeatable)")->check(CLI::ExistingFile);
  add_stop_options(search, stop_paths);

  // translate-query
  std::string dir_s = "ja-en";
  std::size_t beam = 20;
  auto* tq = app.add_subcommand("translate-query", "Show ranked query translations");
  tq->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
  tq->add_option("--lm", lm_paths, "Target-language model")->required()->check(CLI::ExistingFile);
  tq->add_option("--query", query)->required();
  tq->add_option("--direction", dir_s)->check(CLI::IsMember({"ja-en", "en-ja"}));
  tq->add_option("--k", k, "Candidates to print")->check(CLI::PositiveNumber);
  tq->add_option("--beam", beam)->check(CLI::PositiveNumber);
  add_stop_options(tq, stop_paths);

  // train-lm
  double lambda = kDefaultLambda;
  bool keep_singletons = false;
  auto* train = app.add_subcommand("train-lm", "Train a bigram language model");
  train->add_option("--corpus", corpus)->required()->check(CLI::ExistingFile);
  train->add_option("--lang", lang_s)->required()->check(CLI::IsMember({"ja", "en"}));
  train->add_option("--lambda", lambda)->check(CLI::Range(0.0, 1.0));
  train->add_flag("--keep-singletons", keep_singletons, "Do not map singleton words to <unk>");
  train->add_option("--out", out_dir, "Model file")->required();
  add_stop_options(train, stop_paths);

  // extract
  std::string ja_corpus, en_corpus, out_path;
  double min_score = 0.0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* ext = app.add_subcommand("extract", "Extract translation hypotheses from family pairs");
  ext->add_option("--ja", ja_corpus)->required()->check(CLI::ExistingFile);
  ext->add_option("--en", en_corpus)->required()->check(CLI::ExistingFile);
  ext->add_option("--min-score", min_score, "Keep hypotheses scoring above this");
  ext->add_option("--threads", threads)->check(CLI::PositiveNumber);
  ext->add_option("--out", out_path)->required();
  add_stop_options(ext, stop_paths);

  // judge-export / judge-import
  std::string hyps_path, judged_path;
  auto* jexp = app.add_subcommand("judge-export", "Write hypotheses as a judgement sheet");
  jexp->add_option("--hyps", hyps_path)->required()->check(CLI::ExistingFile);
  jexp->add_option("--min-score", min_score);
  jexp->add_option("--out", out_path)->required();

  auto* jimp = app.add_subcommand("judge-import", "Merge correct judged translations into a lexicon");
  jimp->add_option("--judged", judged_path)->required()->check(CLI::ExistingFile);
  jimp->add_option("--lexicon", lexicon_path, "Existing lexicon (optional)")->check(CLI::ExistingFile);
  jimp->add_option("--out", out_path)->required();

  // accuracy
  std::string thresholds_s = "0.5,1.0,1.5,2.0,3.0";
  auto* acc = app.add_subcommand("accuracy", "Accuracy by score threshold");
  acc->add_option("--hyps", hyps_path)->required()->check(CLI::ExistingFile);
  acc->add_option("--judged", judged_path)->required()->check(CLI::ExistingFile);
  acc->add_option("--thresholds", thresholds_s, "Comma separated");

  // serve
  std::string host = "127.0.0.1", config_path, static_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(1, 65535));
  serve->add_option("--ja-index", ja_index)->required()->check(CLI::ExistingDirectory);
  serve->add_option("--en-index", en_index)->required()->check(CLI::ExistingDirectory);
  serve->add_option("--lexicon", lexicon_path)->required()->check(CLI::ExistingFile);
  serve->add_option("--lm", lm_paths, "Language model file (repeatable)")->check(CLI::ExistingFile);
  serve->add_option("--config", config_path)->check(CLI::ExistingFile);
  serve->add_option("--static", static_dir, "Directory served at /")->check(CLI::ExistingDirectory);
  add_stop_options(serve, stop_paths);

  // synth
  uint64_t seed = 1;
  std::size_t pairs = 200, entries = 300;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic comparable corpus and its lexicon");
  synth->add_option("--seed", seed);
  synth->add_option("--pairs", pairs)->check(CLI::PositiveNumber);
  synth->add_option("--entries", entries)->check(CLI::PositiveNumber);
  synth->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Stoplists stop = load_stoplists(stop_paths);

    if (*index) {
      const Lang lang = kLangMap.at(lang_s);
      auto coll = load_collection(corpus);
      auto idx = InvertedIndex::build(coll, lang, stop);
      idx.save(out_dir);
      Collection mine;
      for (auto& d : coll.docs)
        if (d.lang == lang) mine.docs.push_back(std::move(d));
      save_collection((fs::path(out_dir) / "docs.jsonl").string(), mine);
      std::cout << "indexed " << idx.doc_count() << " " << lang_s << " documents, " << idx.term_count()
                << " terms -> " << out_dir << "\n";
    } else if (*search) {
      const Lang lang = kLangMap.at(lang_s);
      auto ja_docs = index_docs(ja_index), en_docs = index_docs(en_index);
      auto ja_idx = InvertedIndex::load(ja_index), en_idx = InvertedIndex::load(en_index);
      auto user_terms = content_words(tokenize(query, lang, stop[lang]));
      std::vector<std::string> translated;
      if (!lexicon_path.empty()) {
        auto lex = BilingualLexicon::load(lexicon_path);
        const Lang dst = other(lang);
        auto lm = load_or_train_lm(lm_paths, dst, dst == Lang::Ja ? ja_docs : en_docs, kDefaultLambda, stop);
        TranslationOptions opt;
        auto cands = decode(build_lattice(user_terms, lex, direction_from(lang), opt), lm, opt.beam, 1);
        if (!cands.empty()) translated = cands.front().target;
        std::cout << "# translated query: " << text::join(translated) << "\n";
      }
      std::map<std::string, std::string> titles;
      for (const auto* c : {&ja_docs, &en_docs})
        for (const auto& d : c->docs) titles[d.id] = d.title;
      std::cout << "rank\tdoc\tlang\tnormalized\tscore\ttitle\n";
      auto hits = bilingual_search(ja_idx, en_idx, user_terms, lang, translated, k);
      for (std::size_t i = 0; i < hits.size(); ++i)
        std::cout << i + 1 << '\t' << hits[i].doc_id << '\t' << to_string(hits[i].lang) << '\t' << std::fixed
                  << std::setprecision(4) << hits[i].normalized_score << '\t' << hits[i].score << '\t'
                  << titles[hits[i].doc_id] << '\n';
    } else if (*tq) {
      const Direction dir = kDirMap.at(dir_s);
      auto lex = BilingualLexicon::load(lexicon_path);
      std::optional<BigramLM> lm;
      for (const auto& p : lm_paths) {
        auto m = BigramLM::load(p);
        if (m.lang() == target_lang(dir)) lm = std::move(m);
      }
      if (!lm) throw Error("no " + std::string(to_string(target_lang(dir))) + " language model among --lm files");
      TranslationOptions opt;
      opt.beam = beam;
      opt.top_k = k;
      print_candidates(translate_query(query, source_lang(dir), lex, *lm, opt, stop));
    } else if (*train) {
      const Lang lang = kLangMap.at(lang_s);
      auto lm = BigramLM::train(load_collection(corpus), lang, {lambda, !keep_singletons}, stop);
      lm.save(out_dir);
      std::cout << "trained " << lang_s << " model, vocabulary " << lm.vocabulary().size() << " -> " << out_dir
                << "\n";
    } else if (*ext) {
      std::vector<std::string> warnings;
      auto fam = pair_families(load_collection(ja_corpus), load_collection(en_corpus), stop, kDefaultMaxPhraseLen,
                               &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      auto hyps = filter_threshold(extract(fam, threads), min_score);
      save_hypotheses(out_path, hyps);
      std::cout << fam.size() << " family pairs, " << hyps.size() << " hypotheses -> " << out_path << "\n";
    } else if (*jexp) {
      auto hyps = filter_threshold(load_hypotheses(hyps_path), min_score);
      export_for_judgement(out_path, hyps);
      std::cout << hyps.size() << " rows -> " << out_path << "\n";
    } else if (*jimp) {
      auto entries_in = to_lexicon_entries(import_judged(judged_path));
      BilingualLexicon base = lexicon_path.empty() ? BilingualLexicon{} : BilingualLexicon::load(lexicon_path);
      auto merged = merge_entries(base, entries_in);
      merged.save(out_path);
      std::cout << entries_in.size() << " correct translations merged; lexicon has " << merged.size()
                << " entries -> " << out_path << "\n";
    } else if (*acc) {
      auto rows = accuracy_report(load_hypotheses(hyps_path), import_judged(judged_path), parse_thresholds(thresholds_s));
      std::cout << render_accuracy_table(rows);
    } else if (*serve) {
      EngineConfig cfg = config_path.empty() ? EngineConfig{} : load_config(config_path);
      Engine engine(cfg, stop);
      httplib::Server server;
      install_routes(server, engine, static_dir);
      // Health answers "loading" while the state is built in the background.
      std::thread loader([&] {
        try {
          auto ja_docs = index_docs(ja_index), en_docs = index_docs(en_index);
          auto ja_lm = load_or_train_lm(lm_paths, Lang::Ja, ja_docs, cfg.lambda, stop);
          auto en_lm = load_or_train_lm(lm_paths, Lang::En, en_docs, cfg.lambda, stop);
          engine.load(InvertedIndex::load(ja_index), InvertedIndex::load(en_index), ja_docs, en_docs,
                      BilingualLexicon::load(lexicon_path), std::move(ja_lm), std::move(en_lm));
          std::cerr << "loaded; serving on " << host << ":" << port << "\n";
        } catch (const std::exception& e) {
          std::cerr << "error: " << e.what() << "\n";
          server.stop();
        }
      });
      g_server = &server;
      std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
      });
      const bool ok = server.listen(host, port);
      loader.join();
      if (!ok && !engine.loaded()) return 1;
    } else if (*synth) {
      auto lex = synthetic_lexicon(seed, entries);
      auto c = generate_synthetic(seed + 1, pairs, lex);
      fs::create_directories(out_dir);
      save_collection((fs::path(out_dir) / "ja.jsonl").string(), c.ja);
      save_collection((fs::path(out_dir) / "en.jsonl").string(), c.en);
      lex.save((fs::path(out_dir) / "lexicon.tsv").string());
      std::cout << pairs << " pairs, " << lex.size() << " lexicon entries -> " << out_dir << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
