#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "durion/durion.hpp"
#include "support/random_tree.hpp"

using durion::AsdSemiring;
using durion::AsdValue;
using durion::common_divisor;
using durion::complete_score;
using durion::complete_voice;
using durion::DurationExpr;
using durion::encode_divs;
using durion::EvalStrategy;
using durion::FoldOnsets;
using durion::longest_voice_total;
using durion::onsets_asd;
using durion::onsets_rsd;
using durion::parse_kern;
using durion::Pianoroll;
using durion::Rational;
using durion::ReferenceDelta;
using durion::RsdSemiring;
using durion::RsdValue;
using durion::Score;
using durion::ScoreEvent;
using durion::split_event;
using durion::to_divs;
using durion::Voice;
using durion::voice_durations;

namespace {

Rational rat(long long p, long long q = 1) {
  return Rational(durion::BigInt(p), durion::BigInt(q));
}
RsdValue rsd(long long p, long long q = 1) { return RsdValue(rat(p, q)); }

std::string fixture(const std::string& name) {
  const std::string path = std::string(DURION_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<RsdValue> example_durations() {
  return {rsd(1, 2), rsd(1, 4), rsd(1, 4), rsd(1),
          rsd(2, 3), rsd(2, 3), rsd(2, 3)};
}

const ReferenceDelta quarter = ReferenceDelta::quarter();

}  // namespace

TEST_CASE("common divisor reproduces the worked reference values") {
  REQUIRE(common_divisor(example_durations()) == rat(1, 12));
  auto longer = example_durations();
  longer.push_back(rsd(1, 8));
  REQUIRE(common_divisor(longer) == rat(1, 24));
  REQUIRE(common_divisor({rsd(1), rsd(1), rsd(1)}) == rat(1));
  REQUIRE(common_divisor({rsd(5, 3)}) == rat(5, 3));

  // Every quotient must land on an integer; that is the point of the fold.
  const Rational delta = common_divisor(example_durations());
  for (const auto& d : example_durations())
    REQUIRE((d.value() / delta).is_integer());

  REQUIRE_THROWS_AS(common_divisor({}), durion::domain_error);
  REQUIRE_THROWS_AS(common_divisor({rsd(1), RsdValue::grace()}),
                    durion::domain_error);
}

TEST_CASE("integer encoding matches the worked div lists") {
  REQUIRE(to_divs(example_durations(), rat(1, 12)) ==
          std::vector<long long>{6, 3, 3, 12, 8, 8, 8});
  REQUIRE(to_divs(example_durations(), rat(1, 24)) ==
          std::vector<long long>{12, 6, 6, 24, 16, 16, 16});
  REQUIRE(to_divs({rsd(1, 2)}, rat(1, 2)) == std::vector<long long>{1});
  REQUIRE_THROWS_WITH(to_divs(example_durations(), rat(1, 5)),
                      Catch::Matchers::ContainsSubstring("index 0"));
  REQUIRE_THROWS_AS(to_divs({rsd(1)}, rat(0)), durion::domain_error);
}

TEST_CASE("onset folds walk the fixture voice in both units") {
  const Score score = parse_kern(fixture("figure1.krn"));
  const auto exprs = voice_durations(score.voices[0]);

  const auto in_rsd = onsets_rsd(exprs, quarter);
  const std::vector<Rational> expected_rsd = {rat(0),    rat(1, 2), rat(3, 4),
                                              rat(1),    rat(2),    rat(8, 3),
                                              rat(10, 3)};
  REQUIRE(in_rsd.onsets.size() == expected_rsd.size());
  for (std::size_t i = 0; i < expected_rsd.size(); ++i)
    REQUIRE(in_rsd.onsets[i].value() == expected_rsd[i]);
  REQUIRE(in_rsd.total == rsd(4));

  const auto in_asd = onsets_asd(exprs);
  REQUIRE(in_asd.onsets.size() == 7);
  REQUIRE(in_asd.onsets[0].is_grace());
  const std::vector<Rational> expected_asd = {rat(8), rat(16, 3), rat(4),
                                              rat(2), rat(3, 2),  rat(6, 5)};
  for (std::size_t i = 1; i < 7; ++i)
    REQUIRE(in_asd.onsets[i].value() == expected_asd[i - 1]);
  REQUIRE(in_asd.total.value() == rat(1));
}

TEST_CASE("both fold routes agree through the unit change") {
  const Score score = parse_kern(fixture("figure1.krn"));
  for (const auto& voice : score.voices) {
    const auto exprs = voice_durations(voice);
    const auto via_asd = onsets_asd(exprs);
    const auto direct = onsets_rsd(exprs, quarter);
    REQUIRE(morph(via_asd.total, quarter) == direct.total);
    for (std::size_t i = 0; i < exprs.size(); ++i)
      REQUIRE(morph(via_asd.onsets[i], quarter) == direct.onsets[i]);
  }
}

TEST_CASE("strategy dispatch picks the requested fold") {
  const Score score = parse_kern(fixture("figure1.krn"));
  const auto exprs = voice_durations(score.voices[0]);
  const auto as_asd = durion::onsets(exprs, EvalStrategy::asd());
  REQUIRE(std::holds_alternative<FoldOnsets<AsdSemiring>>(as_asd));
  const auto as_auto = durion::onsets(exprs, EvalStrategy::automatic());
  REQUIRE(std::holds_alternative<FoldOnsets<RsdSemiring>>(as_auto));
  REQUIRE(std::get<FoldOnsets<RsdSemiring>>(as_auto).total == rsd(4));
}

TEST_CASE("longest-voice selection folds with oplus") {
  REQUIRE(longest_voice_total<RsdSemiring>({rsd(4), rsd(2)}) == rsd(4));
  REQUIRE(longest_voice_total<AsdSemiring>({AsdValue(rat(1)), AsdValue(rat(2))}) ==
          AsdValue(rat(1)));
  REQUIRE(longest_voice_total<RsdSemiring>({rsd(7, 3)}) == rsd(7, 3));
  REQUIRE_THROWS_AS(longest_voice_total<RsdSemiring>({}), durion::domain_error);
}

TEST_CASE("rest decomposition is greedy over plain and dotted symbols") {
  REQUIRE(durion::decompose_rest(rsd(2), quarter) ==
          std::vector<DurationExpr>{DurationExpr::base(2)});
  REQUIRE(durion::decompose_rest(rsd(3, 2), quarter) ==
          std::vector<DurationExpr>{
              DurationExpr::dot(DurationExpr::base(4), 1)});
  REQUIRE(durion::decompose_rest(RsdValue::grace(), quarter).empty());

  // Non-dyadic remainders end in one exact scaling node.
  const auto thirds = durion::decompose_rest(rsd(1, 3), quarter);
  REQUIRE(thirds.size() == 3);
  REQUIRE(thirds[0] == DurationExpr::base(16));
  REQUIRE(thirds[1] == DurationExpr::base(64));
  REQUIRE(thirds[2] ==
          DurationExpr::repeat(DurationExpr::base(1), rat(1, 192)));

  std::mt19937 rng(99);
  std::uniform_int_distribution<long long> num(0, 12), den(1, 12);
  for (int i = 0; i < 500; ++i) {
    const RsdValue deficit = rsd(num(rng), den(rng));
    Rational sum;
    for (const auto& expr : durion::decompose_rest(deficit, quarter))
      sum = sum + eval_rsd(expr, quarter).value();
    REQUIRE(sum == deficit.value());
  }
}

TEST_CASE("voice completion appends exactly the missing rests") {
  const Score score = parse_kern(fixture("figure1.krn"));
  const Voice completed = complete_voice(score.voices[1], rsd(4), quarter);
  REQUIRE(completed.events.size() == 2);
  REQUIRE(completed.events[1].kind == ScoreEvent::Kind::rest);
  REQUIRE(completed.events[1].duration == DurationExpr::base(2));
  REQUIRE(onsets_rsd(voice_durations(completed), quarter).total == rsd(4));

  // Already full: unchanged. Completing twice: identity.
  const Voice full = complete_voice(score.voices[0], rsd(4), quarter);
  REQUIRE(full.events.size() == 7);
  const Voice twice = complete_voice(completed, rsd(4), quarter);
  REQUIRE(twice.events.size() == completed.events.size());

  REQUIRE_THROWS_AS(complete_voice(score.voices[0], rsd(2), quarter),
                    durion::domain_error);
}

TEST_CASE("score completion levels every voice at the longest total") {
  const Score completed =
      complete_score(parse_kern(fixture("figure1.krn")), quarter);
  std::vector<RsdValue> totals;
  for (const auto& voice : completed.voices)
    totals.push_back(onsets_rsd(voice_durations(voice), quarter).total);
  REQUIRE(totals[0] == rsd(4));
  REQUIRE(totals[1] == rsd(4));
  REQUIRE(completed.voices[1].events.size() == 2);
}

TEST_CASE("splitting an event preserves the voice total") {
  const Score score = parse_kern(fixture("figure1.krn"));
  const Voice& top = score.voices[0];
  const Voice after = split_event(top, 2, 2);
  REQUIRE(after.events.size() == 8);
  REQUIRE(after.events[2].duration ==
          DurationExpr::repeat(DurationExpr::base(16), rat(1, 2)));
  REQUIRE(after.events[3].duration == after.events[2].duration);
  REQUIRE(eval_asd(after.events[2].duration) == AsdValue(rat(32)));
  REQUIRE(after.events[2].pitch == top.events[2].pitch);
  REQUIRE(onsets_rsd(voice_durations(after), quarter).total ==
          onsets_rsd(voice_durations(top), quarter).total);

  REQUIRE_THROWS_AS(split_event(top, 7, 2), durion::domain_error);
  REQUIRE_THROWS_AS(split_event(top, 0, 1), durion::domain_error);

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> parts(2, 8);
  std::uniform_int_distribution<std::size_t> index(0, top.events.size() - 1);
  for (int i = 0; i < 200; ++i) {
    const Voice randomized = split_event(top, index(rng), parts(rng));
    REQUIRE(onsets_rsd(voice_durations(randomized), quarter).total == rsd(4));
  }
}

TEST_CASE("the worked split recomputes the reference to 1/24") {
  const Score score = parse_kern(fixture("figure1.krn"));
  Score split = score;
  split.voices[0] = split_event(split.voices[0], 2, 2);
  const auto encoding = encode_divs(split);
  REQUIRE(encoding.delta == rat(1, 24));
  REQUIRE(encoding.divs[0] ==
          std::vector<long long>{12, 6, 3, 3, 24, 16, 16, 16});
  REQUIRE(encoding.divs[1] == std::vector<long long>{48});
}

TEST_CASE("divs encoding carries exact integer onsets") {
  const auto encoding = encode_divs(parse_kern(fixture("figure1.krn")));
  REQUIRE(encoding.delta == rat(1, 12));
  REQUIRE(encoding.divs[0] == std::vector<long long>{6, 3, 3, 12, 8, 8, 8});
  REQUIRE(encoding.onsets[0] ==
          std::vector<long long>{0, 6, 9, 12, 24, 32, 40, 48});
  REQUIRE(encoding.divs[1] == std::vector<long long>{24});
  REQUIRE(encoding.onsets[1] == std::vector<long long>{0, 24});

  const auto pinned = encode_divs(parse_kern(fixture("figure1.krn")),
                                  rat(1, 24));
  REQUIRE(pinned.divs[0] ==
          std::vector<long long>{12, 6, 6, 24, 16, 16, 16});

  REQUIRE_THROWS_AS(
      encode_divs(parse_kern(fixture("figure1.krn")), rat(1, 5)),
      durion::domain_error);
}

TEST_CASE("the merged pianoroll matches the worked grid") {
  const Pianoroll roll = durion::pianoroll(parse_kern(fixture("figure1.krn")));
  REQUIRE(roll.delta == rat(1, 12));
  REQUIRE(roll.columns == 48);
  REQUIRE(roll.rows.size() == 5);

  const auto check_row = [&](int pitch,
                             const std::vector<std::pair<int, int>>& spans) {
    const auto& row = roll.rows.at(pitch);
    std::vector<std::uint32_t> expected(48, 0);
    for (const auto& [from, to] : spans)
      for (int c = from; c < to; ++c) expected[static_cast<std::size_t>(c)] = 1;
    REQUIRE(row == expected);
  };
  check_row(55, {{0, 24}});
  check_row(60, {{0, 6}, {9, 12}});
  check_row(62, {{6, 9}, {40, 48}});
  check_row(64, {{12, 24}, {32, 40}});
  check_row(65, {{24, 32}});

  REQUIRE(roll.sounding(55, 23));
  REQUIRE_FALSE(roll.sounding(55, 24));
  REQUIRE_FALSE(roll.sounding(60, 48));
  REQUIRE_FALSE(roll.sounding(12, 0));
}

TEST_CASE("overlapping voices add up cell-wise") {
  const Score unison = parse_kern("**kern\t**kern\n4c\t4c\n*-\t*-\n");
  const Pianoroll roll = durion::pianoroll(unison);
  REQUIRE(roll.delta == rat(1));
  REQUIRE(roll.columns == 1);
  REQUIRE(roll.rows.at(60) == std::vector<std::uint32_t>{2});
  REQUIRE(roll.sounding(60, 0));
}

TEST_CASE("pianoroll edge cases: explicit reference, emptiness, grace") {
  const Score single = parse_kern(fixture("single_note.krn"));
  const Pianoroll fine = durion::pianoroll(single, rat(1, 4));
  REQUIRE(fine.columns == 4);
  REQUIRE(fine.rows.at(60) == std::vector<std::uint32_t>{1, 1, 1, 1});
  REQUIRE_THROWS_AS(durion::pianoroll(single, rat(2, 3)),
                    durion::domain_error);

  const Pianoroll empty = durion::pianoroll(parse_kern("**kern\n*-\n"));
  REQUIRE(empty.columns == 0);
  REQUIRE(empty.rows.empty());

  const Pianoroll graced = durion::pianoroll(parse_kern(fixture("grace.krn")));
  REQUIRE(graced.delta == rat(1));
  REQUIRE(graced.columns == 4);
  for (const auto& [pitch, row] : graced.rows)
    for (const auto cell : row) REQUIRE(cell <= 1);
}

TEST_CASE("rests advance time without painting") {
  const Score score = parse_kern(fixture("dotted_and_rests.krn"));
  const Pianoroll roll = durion::pianoroll(score);
  REQUIRE(roll.delta == rat(1, 2));
  REQUIRE(roll.columns == 8);
  REQUIRE(roll.rows.at(60) ==
          std::vector<std::uint32_t>{1, 1, 1, 0, 0, 0, 0, 0});
  REQUIRE(roll.rows.at(62) ==
          std::vector<std::uint32_t>{0, 0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("divs arithmetic stays in integers after encoding") {
  const auto encoding = encode_divs(parse_kern(fixture("tuplets.krn")));
  for (std::size_t v = 0; v < encoding.divs.size(); ++v) {
    long long acc = 0;
    for (std::size_t i = 0; i < encoding.divs[v].size(); ++i) {
      REQUIRE(encoding.onsets[v][i] == acc);
      acc += encoding.divs[v][i];
    }
    REQUIRE(encoding.onsets[v].back() == acc);
  }
}

TEST_CASE("measure-scoped folding agrees with the direct fold") {
  for (const char* name :
       {"figure1.krn", "dotted_and_rests.krn", "tuplets.krn", "grace.krn"}) {
    const Score score = parse_kern(fixture(name));
    for (const auto& voice : score.voices) {
      const auto scoped = durion::measure_scoped_onsets(voice, quarter);
      const auto direct = onsets_rsd(voice_durations(voice), quarter);
      REQUIRE(scoped.total == direct.total);
      REQUIRE(scoped.onsets.size() == direct.onsets.size());
      for (std::size_t i = 0; i < direct.onsets.size(); ++i)
        REQUIRE(scoped.onsets[i] == direct.onsets[i]);
    }
  }
}

TEST_CASE("serialization is deterministic and exact") {
  const Score single = parse_kern(fixture("single_note.krn"));
  const Pianoroll roll = durion::pianoroll(single);
  REQUIRE(durion::to_csv(roll) == "pitch,c0\n60,1\n");
  REQUIRE(durion::to_json(roll) ==
          "{\n  \"columns\": 1,\n  \"delta\": \"1\",\n  \"rows\": {\n"
          "    \"60\": [\n      1\n    ]\n  }\n}\n");

  const auto encoding = encode_divs(single);
  REQUIRE(durion::to_json(encoding) ==
          "{\n  \"delta\": \"1\",\n  \"voices\": [\n    {\n"
          "      \"divs\": [\n        1\n      ],\n"
          "      \"onsets\": [\n        0,\n        1\n      ],\n"
          "      \"voice\": 0\n    }\n  ]\n}\n");

  const Pianoroll big = durion::pianoroll(parse_kern(fixture("figure1.krn")));
  const std::string csv = durion::to_csv(big);
  REQUIRE(csv.substr(0, 12) == "pitch,c0,c1,");
  REQUIRE(csv.find("\n55,1,1,") != std::string::npos);
  REQUIRE(durion::to_csv(big) == csv);
}
