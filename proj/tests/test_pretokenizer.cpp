#include <fstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "hebkit/pretokenizer.hpp"

using hebkit::PreToken;
using hebkit::PreTokenKind;
using hebkit::PretokenizerOptions;
using hebkit::normalize;
using hebkit::pretokenize;

namespace {

std::vector<std::string> texts_of(const std::vector<PreToken>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.text);
  return out;
}

std::vector<PreTokenKind> kinds_of(const std::vector<PreToken>& toks) {
  std::vector<PreTokenKind> out;
  for (const auto& t : toks) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST_CASE("normalization unifies Hebrew quote marks and controls") {
  SECTION("gershayim becomes an ASCII double quote") {
    CHECK(normalize("צה״ל").text == "צה\"ל");
  }
  SECTION("geresh becomes an ASCII apostrophe") {
    CHECK(normalize("ג׳ירפה").text == "ג'ירפה");
  }
  SECTION("zero-width and control characters become spaces") {
    CHECK(normalize("אב​גד").text == "אב גד");
    CHECK(normalize("א\x01ב").text == "א ב");
  }
  SECTION("offsets track both texts through a width change") {
    // gershayim is two bytes raw, one byte normalized
    const auto norm = normalize("צה״ל");
    REQUIRE(norm.offsets.size() == 4);
    CHECK(norm.offsets[2].norm == 4);
    CHECK(norm.offsets[2].raw == 4);
    CHECK(norm.offsets[3].norm == 5);
    CHECK(norm.offsets[3].raw == 6);
  }
}

TEST_CASE("abbreviation fixture lines each stay a single word") {
  std::ifstream in(std::string(TESTS_DATA_DIR) + "/abbreviations.txt");
  REQUIRE(in.good());
  size_t total = 0, with_gershayim = 0, with_geresh = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++total;
    if (line.find("\xD7\xB4") != std::string::npos) ++with_gershayim;
    if (line.find("\xD7\xB3") != std::string::npos) ++with_geresh;
    INFO("fixture line: " << line);
    const auto toks = pretokenize(line);
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].kind == PreTokenKind::Word);
  }
  CHECK(total >= 20);
  CHECK(with_gershayim >= 10);
  CHECK(with_geresh >= 10);
  CHECK(with_gershayim + with_geresh == total);
}

TEST_CASE("quotation marks around a word split off") {
  SECTION("gershayim used as quotes") {
    const auto toks = pretokenize("״שלום״");
    REQUIRE(kinds_of(toks) == std::vector<PreTokenKind>{PreTokenKind::Punct,
                                                        PreTokenKind::Word,
                                                        PreTokenKind::Punct});
    CHECK(toks[1].text == "שלום");
  }
  SECTION("ASCII quotes around a phrase") {
    const auto toks = pretokenize("\"ספר טוב\"");
    REQUIRE(toks.size() == 4);
    CHECK(texts_of(toks) == std::vector<std::string>{"\"", "ספר", "טוב", "\""});
  }
  SECTION("quote flanked by a letter and a space splits") {
    const auto toks = pretokenize("אמר\" לו");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].text == "אמר");
    CHECK(toks[1].kind == PreTokenKind::Punct);
  }
}

TEST_CASE("word-internal quote retention needs Hebrew letters on both sides") {
  SECTION("abbreviation with Hebrew on both sides stays whole") {
    const auto toks = pretokenize("צה\"ל");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].text == "צה\"ל");
  }
  SECTION("Latin letters around a quote do not retain it") {
    const auto toks = pretokenize("ab\"cd");
    REQUIRE(toks.size() == 3);
    CHECK(texts_of(toks) == std::vector<std::string>{"ab", "\"", "cd"});
  }
}

TEST_CASE("apostrophe retention needs a preceding Hebrew letter") {
  SECTION("medial geresh in a loanword") {
    const auto toks = pretokenize("ג׳ירפה");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].text == "ג'ירפה");
  }
  SECTION("final geresh in a truncated abbreviation") {
    const auto toks = pretokenize("וכו׳ ועוד");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].text == "וכו'");
    CHECK(toks[0].kind == PreTokenKind::Word);
  }
  SECTION("leading apostrophe splits off") {
    const auto toks = pretokenize("׳אבג");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].kind == PreTokenKind::Punct);
    CHECK(toks[1].text == "אבג");
  }
  SECTION("apostrophe after a Latin letter splits") {
    const auto toks = pretokenize("don't");
    REQUIRE(toks.size() == 3);
    CHECK(texts_of(toks) == std::vector<std::string>{"don", "'", "t"});
  }
}

TEST_CASE("digit runs keep internal decimal points and grouping commas") {
  SECTION("decimal point") {
    const auto toks = pretokenize("3.14");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].kind == PreTokenKind::Number);
    CHECK(toks[0].text == "3.14");
  }
  SECTION("grouping comma") {
    const auto toks = pretokenize("1,000,000");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].text == "1,000,000");
  }
  SECTION("trailing dot is sentence punctuation, not part of the number") {
    const auto toks = pretokenize("42.");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].text == "42");
    CHECK(toks[0].kind == PreTokenKind::Number);
    CHECK(toks[1].text == ".");
    CHECK(toks[1].kind == PreTokenKind::Punct);
  }
  SECTION("number between Hebrew words") {
    const auto toks = pretokenize("עלייה של 3.5 אחוז");
    REQUIRE(toks.size() == 4);
    CHECK(toks[2].kind == PreTokenKind::Number);
    CHECK(toks[2].text == "3.5");
  }
  SECTION("digits do not merge into adjacent words") {
    const auto toks = pretokenize("מספר7");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].kind == PreTokenKind::Word);
    CHECK(toks[1].kind == PreTokenKind::Number);
  }
}

TEST_CASE("strict abbreviation mode keeps quotes only before the final letter") {
  PretokenizerOptions strict;
  strict.strict_abbreviation = true;
  SECTION("single letter after the mark stays whole") {
    const auto toks = pretokenize("צה\"ל", strict);
    REQUIRE(toks.size() == 1);
  }
  SECTION("multiple letters after the mark split under strict mode") {
    const auto strict_toks = pretokenize("מנכ\"לית", strict);
    REQUIRE(strict_toks.size() == 3);
    CHECK(texts_of(strict_toks) ==
          std::vector<std::string>{"מנכ", "\"", "לית"});
    // default mode keeps the same input whole
    const auto lax_toks = pretokenize("מנכ\"לית");
    REQUIRE(lax_toks.size() == 1);
  }
}

TEST_CASE("pre-token offsets address the normalized text") {
  const auto norm = normalize("  שלום, עולם​12");
  const auto toks = pretokenize(norm);
  REQUIRE(toks.size() == 4);
  for (const auto& t : toks) {
    CHECK(norm.text.substr(t.begin, t.end - t.begin) == t.text);
  }
  CHECK(kinds_of(toks) == std::vector<PreTokenKind>{
                              PreTokenKind::Word, PreTokenKind::Punct,
                              PreTokenKind::Word, PreTokenKind::Number});
}
