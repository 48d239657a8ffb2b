// Hand-romanized katakana words: mora by mora from the Hepburn table, with
// ー repeating the previous vowel and ッ doubling the next consonant.

#ifndef PRIME_TESTS_FIXTURES_HPP
#define PRIME_TESTS_FIXTURES_HPP

#include <string>
#include <utility>
#include <vector>

namespace fixtures {

inline const std::vector<std::pair<std::string, std::string>>& katakana_romaji() {
  static const std::vector<std::pair<std::string, std::string>> v = {
      {"テスト", "tesuto"},           // te su to
      {"カード", "kaado"},            // ka a(ー) do
      {"コンピューター", "konpyuutaa"},  // ko n pyu u(ー) ta a(ー)
      {"ネットワーク", "nettowaaku"},    // ne t+to wa a(ー) ku
      {"キャッシュ", "kyasshu"},        // kya s+shu
      {"マッチ", "matchi"},            // ma t+chi
      {"チェック", "chekku"},          // che k+ku
      {"パッケージ", "pakkeeji"},       // pa k+ke e(ー) ji
      {"ティッシュ", "tisshu"},         // ti s+shu
      {"ヴァイオリン", "vaiorin"},       // va i o ri n
      {"サーバー", "saabaa"},          // sa a(ー) ba a(ー)
      {"データ", "deeta"},             // de e(ー) ta
      {"メモリー", "memorii"},          // me mo ri i(ー)
      {"ソフトウェア", "sofutowea"},     // so fu to we a
      {"ファイル", "fairu"},           // fa i ru
      {"プリンター", "purintaa"},       // pu ri n ta a(ー)
      {"ディスク", "disuku"},          // di su ku
      {"ジョッキ", "jokki"},           // jo k+ki
      {"シャッター", "shattaa"},        // sha t+ta a(ー)
      {"ニュース", "nyuusu"},          // nyu u(ー) su
  };
  return v;
}

}  // namespace fixtures

#endif  // PRIME_TESTS_FIXTURES_HPP
