#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "durion/errors.hpp"
#include "durion/lazy.hpp"

namespace durion {

struct ScoreEvent {
  enum class Kind { note, rest };
  Kind kind;
  std::optional<int> pitch;  // MIDI number, notes only
  DurationExpr duration;
  std::string source_token;
  int measure_index = 0;
};

struct Voice {
  int voice_index = 0;
  std::vector<ScoreEvent> events;
};

struct Score {
  std::vector<Voice> voices;
  int measure_count = 0;
};

/// Duration numeral with trailing dots ("12", "4.") to a lazy expression.
/// The numeral n factors as 2^k * m with m odd; a plain power of two is a
/// Base leaf and m >= 3 becomes Tuplet(Base(2^(k+1)), m); the doubled base
/// is what makes the gamma-in-the-time-of-two ratio land exactly on n.
/// Dots wrap the factored symbol. No duration value is computed here.
inline DurationExpr parse_recip(std::string_view recip, std::size_t line = 0) {
  std::size_t i = 0;
  while (i < recip.size() && recip[i] >= '0' && recip[i] <= '9') ++i;
  if (i == 0) throw parse_error("duration numeral expected", line);
  if (i > 6) throw unsupported_error("duration numeral '" +
                                         std::string(recip.substr(0, i)) + "'",
                                     line);
  long long n = 0;
  for (std::size_t j = 0; j < i; ++j) n = n * 10 + (recip[j] - '0');
  std::size_t dots = 0;
  while (i + dots < recip.size() && recip[i + dots] == '.') ++dots;
  if (i + dots != recip.size())
    throw parse_error("malformed duration '" + std::string(recip) + "'", line);

  if (n == 0)
    throw unsupported_error("breve duration numeral '0'", line);
  long long base = 1;
  long long odd = n;
  while (odd % 2 == 0) {
    odd /= 2;
    base *= 2;
  }
  if (odd >= 3) base *= 2;  // gamma notes in the time of two
  if (base > 128)
    throw unsupported_error("duration numeral '" + std::to_string(n) + "'",
                            line);
  DurationExpr expr = DurationExpr::base(static_cast<int>(base));
  if (odd >= 3) expr = DurationExpr::tuplet(std::move(expr),
                                            static_cast<int>(odd));
  if (dots > 0) expr = DurationExpr::dot(std::move(expr),
                                         static_cast<int>(dots));
  return expr;
}

/// Kern pitch spelling to MIDI: `c` = 60 (C4), repeated lowercase letters
/// ascend octaves, `C` = 48 with repeats descending; `#` raises and `-`
/// lowers a semitone each.
inline int parse_pitch(std::string_view pitch, std::size_t line = 0) {
  if (pitch.empty()) throw parse_error("pitch expected", line);
  const char letter = pitch[0];
  const bool lower = letter >= 'a' && letter <= 'g';
  if (!lower && !(letter >= 'A' && letter <= 'G'))
    throw parse_error("pitch letter expected in '" + std::string(pitch) + "'",
                      line);
  std::size_t run = 1;
  while (run < pitch.size() && pitch[run] == letter) ++run;
  int accidental = 0;
  for (std::size_t i = run; i < pitch.size(); ++i) {
    if (pitch[i] == '#') ++accidental;
    else if (pitch[i] == '-') --accidental;
    else if ((pitch[i] >= 'a' && pitch[i] <= 'g') ||
             (pitch[i] >= 'A' && pitch[i] <= 'G'))
      throw parse_error("mixed pitch letters in '" + std::string(pitch) + "'",
                        line);
    else
      throw parse_error("malformed pitch '" + std::string(pitch) + "'", line);
  }
  static constexpr int semitone_from_c[] = {9, 11, 0, 2, 4, 5, 7};  // a..g
  const int offset = semitone_from_c[(lower ? letter - 'a' : letter - 'A')];
  const int octave_base =
      lower ? 60 + 12 * static_cast<int>(run - 1)
            : 48 - 12 * static_cast<int>(run - 1);
  const int midi = octave_base + offset + accidental;
  if (midi < 0 || midi > 127)
    throw parse_error("pitch '" + std::string(pitch) + "' out of MIDI range",
                      line);
  return midi;
}

/// Letter-and-accidental part of a note token, for display.
inline std::string pitch_spelling(std::string_view token) {
  std::string out;
  for (char c : token)
    if ((c >= 'a' && c <= 'g') || (c >= 'A' && c <= 'G') || c == '#' ||
        c == '-')
      out += c;
  return out;
}

namespace detail {

struct TokenPieces {
  std::string_view recip;  // digits and dots; may be empty for grace notes
  std::string_view pitch;  // letters and accidentals; empty for rests
  bool rest = false;
  bool grace = false;
};

// Strict token shape: digits, dots, then `r` or a pitch, then an optional
// grace marker. The constructs the parser knowingly excludes are reported
// as unsupported features; anything else is malformed.
inline TokenPieces scan_token(std::string_view token, std::size_t line) {
  for (char c : token) {
    if (c == '[' || c == ']' || c == '_')
      throw unsupported_error("tie marker in token '" + std::string(token) +
                                  "'",
                              line);
    if (c == ' ')
      throw unsupported_error("chord in token '" + std::string(token) + "'",
                              line);
    if (c == 'L' || c == 'J')
      throw unsupported_error("beam in token '" + std::string(token) + "'",
                              line);
    if (c == '(' || c == ')')
      throw unsupported_error("slur in token '" + std::string(token) + "'",
                              line);
    if (c == '{' || c == '}')
      throw unsupported_error("phrase mark in token '" + std::string(token) +
                                  "'",
                              line);
  }

  TokenPieces pieces;
  std::size_t i = 0;
  while (i < token.size() && token[i] >= '0' && token[i] <= '9') ++i;
  while (i < token.size() && token[i] == '.') ++i;
  pieces.recip = token.substr(0, i);

  if (i < token.size() && token[i] == 'r') {
    pieces.rest = true;
    ++i;
  } else {
    const std::size_t pitch_start = i;
    while (i < token.size() &&
           ((token[i] >= 'a' && token[i] <= 'g') ||
            (token[i] >= 'A' && token[i] <= 'G') || token[i] == '#' ||
            token[i] == '-'))
      ++i;
    pieces.pitch = token.substr(pitch_start, i - pitch_start);
  }

  if (i < token.size() && (token[i] == 'q' || token[i] == 'Q')) {
    pieces.grace = true;
    ++i;
  }
  if (i != token.size())
    throw parse_error("malformed token '" + std::string(token) + "'", line);
  if (pieces.rest && pieces.grace)
    throw parse_error("malformed token '" + std::string(token) +
                          "': grace rest",
                      line);
  if (!pieces.rest && pieces.pitch.empty())
    throw parse_error("malformed token '" + std::string(token) +
                          "': no pitch and no rest marker",
                      line);
  if (!pieces.grace && pieces.recip.empty())
    throw parse_error("token '" + std::string(token) +
                          "' missing a duration numeral",
                      line);
  return pieces;
}

inline std::vector<std::string_view> split_tabs(std::string_view record) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = record.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(record.substr(start));
      return out;
    }
    out.push_back(record.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace detail

/// Parses the supported kern subset: `**kern` header, tab-separated
/// parallel spines, note/rest/dot/tuplet tokens, barlines, comments, tandem
/// interpretations, null tokens, grace notes, `*-` terminator. One voice
/// per spine. Durations are imported lazily: the parser performs no
/// duration arithmetic at all.
inline Score parse_kern(std::string_view text) {
  Score score;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  bool terminated = false;
  int measure = 0;

  while (pos <= text.size()) {
    if (pos == text.size() && line_no > 0) break;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view record = text.substr(pos, eol - pos);
    if (!record.empty() && record.back() == '\r') record.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    if (pos > text.size() && record.empty()) break;

    if (record.empty() || record[0] == '!') continue;

    if (!header_seen) {
      if (record.substr(0, 2) != "**")
        throw parse_error("missing **kern header", line_no);
      for (const auto column : detail::split_tabs(record)) {
        if (column != "**kern")
          throw unsupported_error("non-kern spine '" + std::string(column) +
                                      "'",
                                  line_no);
        Voice voice;
        voice.voice_index = static_cast<int>(score.voices.size());
        score.voices.push_back(std::move(voice));
      }
      header_seen = true;
      continue;
    }

    const auto columns = detail::split_tabs(record);
    if (terminated)
      throw parse_error("data after spine terminator", line_no);
    if (columns.size() != score.voices.size())
      throw parse_error("expected " + std::to_string(score.voices.size()) +
                            " spine(s), found " +
                            std::to_string(columns.size()),
                        line_no);

    if (record[0] == '=') {
      for (const auto column : columns)
        if (column.empty() || column[0] != '=')
          throw parse_error("inconsistent barline record", line_no);
      ++measure;
      continue;
    }

    if (record[0] == '*') {
      std::size_t closed = 0;
      for (const auto column : columns) {
        if (column == "*-") ++closed;
        if (column == "*^" || column == "*v" || column == "*+" ||
            column == "*x")
          throw unsupported_error("spine split/merge '" + std::string(column) +
                                      "'",
                                  line_no);
      }
      if (closed == columns.size()) {
        terminated = true;
        continue;
      }
      if (closed != 0)
        throw parse_error("spine terminator on a subset of spines", line_no);
      continue;  // tandem interpretation
    }

    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto token = columns[i];
      if (token == ".") continue;
      if (token.empty())
        throw parse_error("empty token", line_no);
      const auto pieces = detail::scan_token(token, line_no);
      DurationExpr duration = pieces.grace
                                  ? DurationExpr::grace()
                                  : parse_recip(pieces.recip, line_no);
      ScoreEvent event{pieces.rest ? ScoreEvent::Kind::rest
                                   : ScoreEvent::Kind::note,
                       pieces.rest ? std::optional<int>()
                                   : std::optional<int>(
                                         parse_pitch(pieces.pitch, line_no)),
                       std::move(duration), std::string(token), measure};
      score.voices[i].events.push_back(std::move(event));
    }
  }

  if (!header_seen) throw parse_error("missing **kern header", line_no);
  if (!terminated) throw parse_error("missing spine terminator *-", line_no);

  std::set<int> measures;
  for (const auto& voice : score.voices)
    for (const auto& event : voice.events) measures.insert(event.measure_index);
  score.measure_count = static_cast<int>(measures.size());
  return score;
}

}  // namespace durion
