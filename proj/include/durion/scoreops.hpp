#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "durion/errors.hpp"
#include "durion/kern.hpp"
#include "durion/lazy.hpp"
#include "durion/modifiers.hpp"
#include "durion/rational.hpp"
#include "durion/semiring.hpp"

namespace durion {

inline std::vector<DurationExpr> voice_durations(const Voice& voice) {
  std::vector<DurationExpr> out;
  out.reserve(voice.events.size());
  for (const auto& event : voice.events) out.push_back(event.duration);
  return out;
}

/// Largest rational dividing every listed duration into a positive integer:
/// a folded rational gcd. Grace durations cannot participate; the reference
/// must stay positive.
inline Rational common_divisor(const std::vector<RsdValue>& durations) {
  if (durations.empty())
    throw domain_error("common divisor of an empty duration list");
  std::optional<Rational> acc;
  for (const auto& d : durations) {
    if (d.is_grace())
      throw domain_error("common divisor over a zero duration");
    acc = acc ? gcd(*acc, d.value()) : d.value();
  }
  return *acc;
}

/// Exact integer quotients duration/delta; any remainder is an error, named
/// by index.
inline std::vector<long long> to_divs(const std::vector<RsdValue>& durations,
                                      const Rational& delta) {
  if (delta.is_zero() || delta.is_infinite())
    throw domain_error("reference value must be positive and finite");
  std::vector<long long> out;
  out.reserve(durations.size());
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const Rational q = durations[i].value() / delta;
    if (!q.is_integer())
      throw domain_error("duration at index " + std::to_string(i) + " (" +
                         durations[i].str() + ") is not a multiple of " +
                         delta.str());
    if (q.num() > std::numeric_limits<long long>::max())
      throw domain_error("div count at index " + std::to_string(i) +
                         " exceeds the integer range");
    out.push_back(q.num().convert_to<long long>());
  }
  return out;
}

/// Prefix concatenation folds: the onset of each event plus the running
/// total, all in one unit system. The first onset is the concatenation
/// neutral (the grace point); the total is the offset of the last event.
template <DurationSemiring S>
struct FoldOnsets {
  std::vector<typename S::value_type> onsets;
  typename S::value_type total;
};

inline FoldOnsets<AsdSemiring> onsets_asd(const std::vector<DurationExpr>& exprs) {
  FoldOnsets<AsdSemiring> out{{}, AsdSemiring::otimes_neutral()};
  out.onsets.reserve(exprs.size());
  for (const auto& e : exprs) {
    out.onsets.push_back(out.total);
    out.total = asd_otimes(out.total, eval_asd(e));
  }
  return out;
}

inline FoldOnsets<RsdSemiring> onsets_rsd(const std::vector<DurationExpr>& exprs,
                                          const ReferenceDelta& delta) {
  FoldOnsets<RsdSemiring> out{{}, RsdSemiring::otimes_neutral()};
  out.onsets.reserve(exprs.size());
  for (const auto& e : exprs) {
    out.onsets.push_back(out.total);
    out.total = rsd_otimes(out.total, eval_rsd(e, delta));
  }
  return out;
}

using OnsetsResult =
    std::variant<FoldOnsets<AsdSemiring>, FoldOnsets<RsdSemiring>>;

/// Strategy-directed onset fold; an automatic strategy resolves through the
/// task table (onset folding prefers reference units).
inline OnsetsResult onsets(const std::vector<DurationExpr>& exprs,
                           const EvalStrategy& strategy) {
  const EvalStrategy resolved =
      strategy.mode() == EvalStrategy::Mode::automatic
          ? choose_strategy(exprs, TaskKind::onset_fold)
          : strategy;
  if (resolved.mode() == EvalStrategy::Mode::force_asd)
    return onsets_asd(exprs);
  return onsets_rsd(exprs, resolved.delta());
}

/// The longest of the listed totals, by oplus fold.
template <DurationSemiring S>
typename S::value_type longest_voice_total(
    const std::vector<typename S::value_type>& totals) {
  if (totals.empty()) throw domain_error("longest total of an empty list");
  typename S::value_type acc = totals.front();
  for (std::size_t i = 1; i < totals.size(); ++i)
    acc = S::oplus(acc, totals[i]);
  return acc;
}

/// Greedy decomposition of a rest span into the largest fitting rest
/// symbols, plain and single-dotted pools considered together; whatever no
/// symbol can cover is emitted as one exact Repeat scaling of the whole
/// note, so the sum always hits the deficit dead on.
inline std::vector<DurationExpr> decompose_rest(const RsdValue& deficit,
                                                const ReferenceDelta& delta_ref) {
  std::vector<std::pair<Rational, DurationExpr>> symbols;
  for (int k = 0; k <= 7; ++k) {
    const int base = 1 << k;
    const Rational plain = delta_ref.value() / Rational(base);
    symbols.emplace_back(plain * Rational(3, 2),
                         DurationExpr::dot(DurationExpr::base(base), 1));
    symbols.emplace_back(plain, DurationExpr::base(base));
  }

  std::vector<DurationExpr> out;
  Rational remaining = deficit.value();
  while (!remaining.is_zero()) {
    const auto fit = [&]() -> const DurationExpr* {
      for (const auto& [value, expr] : symbols)
        if (value <= remaining) {
          remaining = remaining - value;
          return &expr;
        }
      return nullptr;
    }();
    if (fit) {
      out.push_back(*fit);
      continue;
    }
    out.push_back(DurationExpr::repeat(DurationExpr::base(1),
                                       remaining / delta_ref.value()));
    remaining = Rational();
  }
  return out;
}

/// Appends rests so the voice's total reaches the target exactly. Never
/// shortens anything: a voice already longer than the target is an error.
inline Voice complete_voice(const Voice& voice, const RsdValue& target_total,
                            const ReferenceDelta& delta_ref) {
  const auto fold = onsets_rsd(voice_durations(voice), delta_ref);
  if (target_total.value() < fold.total.value())
    throw domain_error("voice " + std::to_string(voice.voice_index) +
                       " is longer than its completion target");
  const RsdValue deficit{target_total.value() - fold.total.value()};
  Voice out = voice;
  const int measure =
      out.events.empty() ? 0 : out.events.back().measure_index;
  for (auto& expr : decompose_rest(deficit, delta_ref))
    out.events.push_back(ScoreEvent{ScoreEvent::Kind::rest, std::nullopt,
                                    std::move(expr), std::string(), measure});
  return out;
}

/// Completes every voice to the longest voice's total.
inline Score complete_score(const Score& score,
                            const ReferenceDelta& delta_ref =
                                ReferenceDelta::quarter()) {
  if (score.voices.empty()) return score;
  std::vector<RsdValue> totals;
  totals.reserve(score.voices.size());
  for (const auto& voice : score.voices)
    totals.push_back(onsets_rsd(voice_durations(voice), delta_ref).total);
  const RsdValue target = longest_voice_total<RsdSemiring>(totals);
  Score out = score;
  for (auto& voice : out.voices)
    voice = complete_voice(voice, target, delta_ref);
  return out;
}

/// Replaces one event by `parts` equal shares, each a lazy Repeat of the
/// original duration. Pitch, kind and measure carry over; the voice's total
/// cannot change because repeat(d, 1/parts) concatenated parts times is d.
inline Voice split_event(const Voice& voice, std::size_t index, int parts) {
  if (index >= voice.events.size())
    throw domain_error("event index " + std::to_string(index) +
                       " out of range");
  if (parts < 2) throw domain_error("split needs at least 2 parts");
  Voice out;
  out.voice_index = voice.voice_index;
  out.events.reserve(voice.events.size() + parts - 1);
  for (std::size_t i = 0; i < voice.events.size(); ++i) {
    if (i != index) {
      out.events.push_back(voice.events[i]);
      continue;
    }
    const auto& original = voice.events[i];
    for (int p = 0; p < parts; ++p)
      out.events.push_back(ScoreEvent{
          original.kind, original.pitch,
          DurationExpr::repeat(original.duration, Rational(1, parts)),
          original.source_token, original.measure_index});
  }
  return out;
}

/// Pitch-by-time grid at resolution delta. Cells count how many voices
/// sound the pitch in the time step; a boolean view is derived, not stored.
struct Pianoroll {
  Rational delta;
  long long columns = 0;
  std::map<int, std::vector<std::uint32_t>> rows;

  bool sounding(int pitch, long long column) const {
    const auto row = rows.find(pitch);
    if (row == rows.end()) return false;
    if (column < 0 || column >= static_cast<long long>(row->second.size()))
      return false;
    return row->second[static_cast<std::size_t>(column)] > 0;
  }
};

/// One voice on the grid: notes paint div-many cells from their onset in
/// their pitch row; rests and grace notes paint nothing but rests still
/// advance time.
inline Pianoroll voice_pianoroll(const Voice& voice, const Rational& delta,
                                 const ReferenceDelta& delta_ref =
                                     ReferenceDelta::quarter()) {
  std::vector<RsdValue> durations;
  durations.reserve(voice.events.size());
  for (const auto& event : voice.events)
    durations.push_back(eval_rsd(event.duration, delta_ref));
  const std::vector<long long> divs = to_divs(durations, delta);

  Pianoroll roll;
  roll.delta = delta;
  long long onset = 0;
  for (std::size_t i = 0; i < voice.events.size(); ++i) {
    if (voice.events[i].kind == ScoreEvent::Kind::note && divs[i] > 0) {
      auto& row = roll.rows[*voice.events[i].pitch];
      if (row.size() < static_cast<std::size_t>(onset + divs[i]))
        row.resize(static_cast<std::size_t>(onset + divs[i]), 0);
      for (long long c = onset; c < onset + divs[i]; ++c)
        ++row[static_cast<std::size_t>(c)];
    }
    onset += divs[i];
  }
  roll.columns = onset;
  for (auto& [pitch, row] : roll.rows)
    row.resize(static_cast<std::size_t>(roll.columns), 0);
  return roll;
}

/// Element-wise sum of two rolls on the same reference.
inline Pianoroll merge(const Pianoroll& a, const Pianoroll& b) {
  if (!(a.delta == b.delta))
    throw domain_error("cannot merge rolls with different references");
  Pianoroll out = a;
  out.columns = std::max(a.columns, b.columns);
  for (auto& [pitch, row] : out.rows)
    row.resize(static_cast<std::size_t>(out.columns), 0);
  for (const auto& [pitch, row] : b.rows) {
    auto& target = out.rows[pitch];
    target.resize(static_cast<std::size_t>(out.columns), 0);
    for (std::size_t c = 0; c < row.size(); ++c) target[c] += row[c];
  }
  return out;
}

/// Whole-score roll: voices are completed against the longest one, painted
/// independently and summed element-wise. Without an explicit delta the
/// resolution is the common divisor of every non-grace note and rest
/// duration in the completed score.
inline Pianoroll pianoroll(const Score& score,
                           const std::optional<Rational>& delta = std::nullopt,
                           const ReferenceDelta& delta_ref =
                               ReferenceDelta::quarter()) {
  const Score completed = complete_score(score, delta_ref);

  Rational resolution;
  if (delta) {
    if (delta->is_zero() || delta->is_infinite())
      throw domain_error("reference value must be positive and finite");
    resolution = *delta;
  } else {
    std::vector<RsdValue> pool;
    for (const auto& voice : completed.voices)
      for (const auto& event : voice.events) {
        RsdValue d = eval_rsd(event.duration, delta_ref);
        if (!d.is_grace()) pool.push_back(std::move(d));
      }
    if (pool.empty()) return Pianoroll{Rational(1), 0, {}};
    resolution = common_divisor(pool);
  }

  Pianoroll out;
  out.delta = resolution;
  for (const auto& voice : completed.voices)
    out = merge(out, voice_pianoroll(voice, resolution, delta_ref));
  return out;
}

/// All durations as integer multiples of one reference, with integer onset
/// prefix sums (the last entry is the voice's total extent).
struct DivsEncoding {
  Rational delta;
  std::vector<std::vector<long long>> divs;
  std::vector<std::vector<long long>> onsets;
};

inline DivsEncoding encode_divs(const Score& score,
                                const std::optional<Rational>& delta =
                                    std::nullopt,
                                const ReferenceDelta& delta_ref =
                                    ReferenceDelta::quarter()) {
  std::vector<std::vector<RsdValue>> per_voice;
  std::vector<RsdValue> pool;
  per_voice.reserve(score.voices.size());
  for (const auto& voice : score.voices) {
    std::vector<RsdValue> durations;
    durations.reserve(voice.events.size());
    for (const auto& event : voice.events) {
      durations.push_back(eval_rsd(event.duration, delta_ref));
      if (!durations.back().is_grace()) pool.push_back(durations.back());
    }
    per_voice.push_back(std::move(durations));
  }

  DivsEncoding out;
  if (delta) {
    if (delta->is_zero() || delta->is_infinite())
      throw domain_error("reference value must be positive and finite");
    out.delta = *delta;
  } else {
    out.delta = common_divisor(pool);
  }

  for (const auto& durations : per_voice) {
    out.divs.push_back(to_divs(durations, out.delta));
    std::vector<long long> onset_row{0};
    for (const long long d : out.divs.back())
      onset_row.push_back(onset_row.back() + d);
    out.onsets.push_back(std::move(onset_row));
  }
  return out;
}

/// Reference-unit onsets computed measure by measure: within a measure the
/// fold runs in symbol units, and measure totals chain in reference units.
/// Agrees with the direct reference-unit fold on every voice.
inline FoldOnsets<RsdSemiring> measure_scoped_onsets(
    const Voice& voice, const ReferenceDelta& delta_ref) {
  FoldOnsets<RsdSemiring> out{{}, RsdValue::grace()};
  out.onsets.reserve(voice.events.size());
  Rational measure_start;
  std::size_t i = 0;
  while (i < voice.events.size()) {
    const int measure = voice.events[i].measure_index;
    AsdValue acc = AsdSemiring::otimes_neutral();
    for (; i < voice.events.size() &&
           voice.events[i].measure_index == measure;
         ++i) {
      out.onsets.push_back(
          RsdValue(measure_start + morph(acc, delta_ref).value()));
      acc = asd_otimes(acc, eval_asd(voice.events[i].duration));
    }
    measure_start = measure_start + morph(acc, delta_ref).value();
  }
  out.total = RsdValue(measure_start);
  return out;
}

}  // namespace durion
