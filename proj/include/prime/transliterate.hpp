#ifndef PRIME_TRANSLITERATE_HPP
#define PRIME_TRANSLITERATE_HPP

#include <string>
#include <string_view>
#include <unordered_map>

#include "prime/error.hpp"
#include "prime/unicode.hpp"

namespace prime {

namespace detail {

// Hepburn romanization of katakana morae. Two-character entries (yoon and
// loanword combinations) are tried before single characters.
inline const std::unordered_map<std::u32string, std::string>& kana_table() {
  static const std::unordered_map<std::u32string, std::string> table = {
      {U"ア", "a"},    {U"イ", "i"},    {U"ウ", "u"},    {U"エ", "e"},    {U"オ", "o"},
      {U"カ", "ka"},   {U"キ", "ki"},   {U"ク", "ku"},   {U"ケ", "ke"},   {U"コ", "ko"},
      {U"ガ", "ga"},   {U"ギ", "gi"},   {U"グ", "gu"},   {U"ゲ", "ge"},   {U"ゴ", "go"},
      {U"サ", "sa"},   {U"シ", "shi"},  {U"ス", "su"},   {U"セ", "se"},   {U"ソ", "so"},
      {U"ザ", "za"},   {U"ジ", "ji"},   {U"ズ", "zu"},   {U"ゼ", "ze"},   {U"ゾ", "zo"},
      {U"タ", "ta"},   {U"チ", "chi"},  {U"ツ", "tsu"},  {U"テ", "te"},   {U"ト", "to"},
      {U"ダ", "da"},   {U"ヂ", "ji"},   {U"ヅ", "zu"},   {U"デ", "de"},   {U"ド", "do"},
      {U"ナ", "na"},   {U"ニ", "ni"},   {U"ヌ", "nu"},   {U"ネ", "ne"},   {U"ノ", "no"},
      {U"ハ", "ha"},   {U"ヒ", "hi"},   {U"フ", "fu"},   {U"ヘ", "he"},   {U"ホ", "ho"},
      {U"バ", "ba"},   {U"ビ", "bi"},   {U"ブ", "bu"},   {U"ベ", "be"},   {U"ボ", "bo"},
      {U"パ", "pa"},   {U"ピ", "pi"},   {U"プ", "pu"},   {U"ペ", "pe"},   {U"ポ", "po"},
      {U"マ", "ma"},   {U"ミ", "mi"},   {U"ム", "mu"},   {U"メ", "me"},   {U"モ", "mo"},
      {U"ヤ", "ya"},   {U"ユ", "yu"},   {U"ヨ", "yo"},
      {U"ラ", "ra"},   {U"リ", "ri"},   {U"ル", "ru"},   {U"レ", "re"},   {U"ロ", "ro"},
      {U"ワ", "wa"},   {U"ヰ", "i"},    {U"ヱ", "e"},    {U"ヲ", "o"},    {U"ン", "n"},
      {U"ヴ", "vu"},
      {U"ァ", "a"},    {U"ィ", "i"},    {U"ゥ", "u"},    {U"ェ", "e"},    {U"ォ", "o"},
      {U"ャ", "ya"},   {U"ュ", "yu"},   {U"ョ", "yo"},   {U"ヮ", "wa"},   {U"ヵ", "ka"},
      {U"ヶ", "ke"},
      // yoon
      {U"キャ", "kya"}, {U"キュ", "kyu"}, {U"キョ", "kyo"},
      {U"ギャ", "gya"}, {U"ギュ", "gyu"}, {U"ギョ", "gyo"},
      {U"シャ", "sha"}, {U"シュ", "shu"}, {U"ショ", "sho"},
      {U"ジャ", "ja"},  {U"ジュ", "ju"},  {U"ジョ", "jo"},
      {U"チャ", "cha"}, {U"チュ", "chu"}, {U"チョ", "cho"},
      {U"ヂャ", "ja"},  {U"ヂュ", "ju"},  {U"ヂョ", "jo"},
      {U"ニャ", "nya"}, {U"ニュ", "nyu"}, {U"ニョ", "nyo"},
      {U"ヒャ", "hya"}, {U"ヒュ", "hyu"}, {U"ヒョ", "hyo"},
      {U"ビャ", "bya"}, {U"ビュ", "byu"}, {U"ビョ", "byo"},
      {U"ピャ", "pya"}, {U"ピュ", "pyu"}, {U"ピョ", "pyo"},
      {U"ミャ", "mya"}, {U"ミュ", "myu"}, {U"ミョ", "myo"},
      {U"リャ", "rya"}, {U"リュ", "ryu"}, {U"リョ", "ryo"},
      // loanword combinations
      {U"イェ", "ye"},  {U"ウィ", "wi"},  {U"ウェ", "we"},  {U"ウォ", "wo"},
      {U"シェ", "she"}, {U"ジェ", "je"},  {U"チェ", "che"},
      {U"ツァ", "tsa"}, {U"ツィ", "tsi"}, {U"ツェ", "tse"}, {U"ツォ", "tso"},
      {U"ティ", "ti"},  {U"ディ", "di"},  {U"トゥ", "tu"},  {U"ドゥ", "du"},
      {U"テュ", "tyu"}, {U"デュ", "dyu"},
      {U"ファ", "fa"},  {U"フィ", "fi"},  {U"フェ", "fe"},  {U"フォ", "fo"},  {U"フュ", "fyu"},
      {U"ヴァ", "va"},  {U"ヴィ", "vi"},  {U"ヴェ", "ve"},  {U"ヴォ", "vo"},  {U"ヴュ", "vyu"},
      {U"クァ", "kwa"}, {U"グァ", "gwa"},
  };
  return table;
}

inline bool is_vowel(char c) { return c == 'a' || c == 'i' || c == 'u' || c == 'e' || c == 'o'; }

}  // namespace detail

inline constexpr char32_t kSmallTsu = U'ッ';
inline constexpr char32_t kLongVowel = U'ー';

/// Romanizes a katakana word. The long-vowel mark repeats the preceding
/// vowel; small tsu doubles the consonant that follows it ("tch" before ch).
/// Throws on anything that is not katakana or cannot be romanized.
inline std::string transliterate(std::string_view word) {
  const std::u32string cps = unicode::decode(unicode::normalize(word));
  if (cps.empty()) throw Error("transliterate: empty input");
  const auto& table = detail::kana_table();
  std::string out;
  bool geminate = false;
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i];
    if (!unicode::is_katakana(c)) throw Error("transliterate: non-katakana input \"" + std::string(word) + "\"");
    if (c == kSmallTsu) {
      if (geminate) throw Error("transliterate: repeated small tsu in \"" + std::string(word) + "\"");
      geminate = true;
      ++i;
      continue;
    }
    if (c == kLongVowel) {
      if (geminate || out.empty() || !detail::is_vowel(out.back()))
        throw Error("transliterate: long-vowel mark without a preceding vowel in \"" + std::string(word) + "\"");
      out += out.back();
      ++i;
      continue;
    }
    std::string mora;
    std::size_t used = 0;
    if (i + 1 < cps.size()) {
      auto it = table.find(cps.substr(i, 2));
      if (it != table.end()) {
        mora = it->second;
        used = 2;
      }
    }
    if (!used) {
      auto it = table.find(cps.substr(i, 1));
      if (it == table.end()) throw Error("transliterate: no romanization for a character in \"" + std::string(word) + "\"");
      mora = it->second;
      used = 1;
    }
    if (geminate) {
      if (detail::is_vowel(mora.front()) || mora == "n")
        throw Error("transliterate: small tsu before a vowel or n in \"" + std::string(word) + "\"");
      out += mora.rfind("ch", 0) == 0 ? 't' : mora.front();
      geminate = false;
    }
    out += mora;
    i += used;
  }
  if (geminate) throw Error("transliterate: small tsu with no following consonant in \"" + std::string(word) + "\"");
  return out;
}

}  // namespace prime

#endif  // PRIME_TRANSLITERATE_HPP
