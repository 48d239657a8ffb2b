#ifndef PRIME_CONFIG_HPP
#define PRIME_CONFIG_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <istream>
#include <string>

#include "prime/clustering.hpp"
#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/langmodel.hpp"
#include "prime/text.hpp"

namespace prime {

struct EngineConfig {
  std::size_t k = 20;  // result cap
  std::size_t clusters = kDefaultClusterCount;
  std::size_t beam = 20;
  std::size_t top_k = 5;  // translation alternates reported
  double lambda = kDefaultLambda;
  double copy_logprob = std::log(0.01);
  std::size_t max_phrase_len = kDefaultMaxPhraseLen;
  std::chrono::minutes session_timeout{30};
};

/// Reads `key = value` lines. '#' starts a comment; values may be quoted.
/// Unknown keys are an error so typos do not pass silently.
inline EngineConfig parse_config(std::istream& in, EngineConfig cfg = {}, const std::string& source = "<config>") {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto body = text::trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, lineno, "expected key = value");
    const std::string key{text::trim(body.substr(0, eq))};
    std::string val{text::trim(body.substr(eq + 1))};
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);

    auto as_count = [&](std::size_t min) {
      int64_t v = 0;
      if (!text::parse_int(val, v) || v < static_cast<int64_t>(min))
        throw ParseError(source, lineno, key + " must be an integer >= " + std::to_string(min));
      return static_cast<std::size_t>(v);
    };
    if (key == "k") {
      cfg.k = as_count(1);
    } else if (key == "clusters") {
      cfg.clusters = as_count(1);
    } else if (key == "beam") {
      cfg.beam = as_count(1);
    } else if (key == "top_k") {
      cfg.top_k = as_count(1);
    } else if (key == "max_phrase_len") {
      cfg.max_phrase_len = as_count(1);
    } else if (key == "session_timeout") {
      cfg.session_timeout = std::chrono::minutes(as_count(1));
    } else if (key == "lambda") {
      if (!text::parse_double(val, cfg.lambda) || !(cfg.lambda > 0 && cfg.lambda < 1))
        throw ParseError(source, lineno, "lambda must lie strictly between 0 and 1");
    } else if (key == "copy_penalty") {
      double p = 0;
      if (!text::parse_double(val, p) || !(p > 0 && p <= 1))
        throw ParseError(source, lineno, "copy_penalty must be a probability in (0, 1]");
      cfg.copy_logprob = std::log(p);
    } else {
      throw ParseError(source, lineno, "unknown key \"" + key + "\"");
    }
  }
  if (cfg.clusters > cfg.k) throw ParseError(source, 0, "clusters must not exceed k");
  return cfg;
}

inline EngineConfig load_config(const std::string& path, EngineConfig cfg = {}) {
  auto in = text::open_in(path);
  return parse_config(in, cfg, path);
}

}  // namespace prime

#endif  // PRIME_CONFIG_HPP
