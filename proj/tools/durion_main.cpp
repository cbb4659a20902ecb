#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "durion/durion.hpp"

namespace {

using durion::AsdValue;
using durion::Rational;
using durion::ReferenceDelta;
using durion::RsdValue;
using durion::Score;
using durion::ScoreEvent;
using durion::Voice;

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw durion::error("cannot open input file: " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw durion::error("cannot open output file: " + path);
  out << text;
}

/// Kern-style spelling for a MIDI number: octave 4 is one lowercase letter,
/// higher octaves double it, octave 3 and below use uppercase; black keys
/// spell as sharps.
std::string pitch_name(int midi) {
  static const char* const classes[12] = {"c", "c#", "d", "d#", "e",  "f",
                                          "f#", "g", "g#", "a", "a#", "b"};
  const char* const cls = classes[midi % 12];
  const int octave = midi / 12 - 1;
  std::string out;
  if (octave >= 4)
    out.assign(static_cast<std::size_t>(octave - 3), cls[0]);
  else
    out.assign(static_cast<std::size_t>(4 - octave),
               static_cast<char>(cls[0] - 'a' + 'A'));
  if (cls[1] != '\0') out += '#';
  return out;
}

std::string show(const Rational& value, bool approx) {
  if (!approx || value.is_infinite()) return value.str();
  std::ostringstream os;
  os << value.approx();
  return os.str();
}

std::string run_parse(const Score& score, const ReferenceDelta& ref,
                      bool approx) {
  std::string out;
  for (const auto& voice : score.voices)
    for (const auto& event : voice.events) {
      out += "voice=" + std::to_string(voice.voice_index);
      out += " m=" + std::to_string(event.measure_index);
      if (event.kind == ScoreEvent::Kind::note)
        out += " note " + pitch_name(*event.pitch) + "(" +
               std::to_string(*event.pitch) + ")";
      else
        out += " rest";
      out += " " + event.duration.str();
      out += " asd=" + show(eval_asd(event.duration).value(), approx);
      out += " rsd=" + show(eval_rsd(event.duration, ref).value(), approx);
      out += "\n";
    }
  return out;
}

std::string join_divs(const std::vector<long long>& divs) {
  std::string out;
  for (const long long d : divs) {
    if (!out.empty()) out += ' ';
    out += std::to_string(d);
  }
  return out;
}

const Voice& voice_at(const Score& score, std::size_t index) {
  if (index >= score.voices.size())
    throw durion::domain_error("voice index " + std::to_string(index) +
                               " out of range");
  return score.voices[index];
}

/// Reference-unit mode recomputes the common divisor for the whole score;
/// symbol-unit mode touches only the split event and reports the two (or k)
/// new numerals, with no divisor work at all.
std::string run_split(const Score& score, std::size_t voice_index,
                      std::size_t event_index, int parts,
                      const std::string& unit, const ReferenceDelta& ref) {
  const Voice& voice = voice_at(score, voice_index);
  if (unit == "asd") {
    const Voice after = durion::split_event(voice, event_index, parts);
    std::string out =
        eval_asd(voice.events[event_index].duration).str() + " → ";
    for (int p = 0; p < parts; ++p) {
      if (p) out += ", ";
      out += eval_asd(after.events[event_index + static_cast<std::size_t>(p)]
                          .duration)
                 .str();
    }
    return out + "; other events untouched\n";
  }

  const durion::DivsEncoding before = durion::encode_divs(score, {}, ref);
  Score modified = score;
  modified.voices[voice_index] =
      durion::split_event(voice, event_index, parts);
  const durion::DivsEncoding after = durion::encode_divs(modified, {}, ref);

  std::string out;
  for (const auto& v : modified.voices) {
    out += "voice " + std::to_string(v.voice_index) + " events:";
    for (const auto& event : v.events) out += " " + event.duration.str();
    out += "\n";
  }
  out += "δ: " + before.delta.str() + " → " + after.delta.str() +
         "; affected values: all\n";
  for (std::size_t v = 0; v < after.divs.size(); ++v)
    out += "voice " + std::to_string(v) + " divs: " + join_divs(after.divs[v]) +
           "\n";
  return out;
}

std::string run_convert(const Rational& value, const std::string& from,
                        const std::string& to, const ReferenceDelta& ref,
                        bool approx) {
  Rational result;
  if (from == "asd") {
    if (value.is_zero())
      throw durion::domain_error("0 is not a symbol-unit duration");
    const AsdValue a =
        value.is_infinite() ? AsdValue::grace() : AsdValue(value);
    result = to == "asd" ? a.value() : morph(a, ref).value();
  } else {
    if (value.is_infinite())
      throw durion::domain_error("inf is not a reference-unit duration");
    const RsdValue r{value};
    result = to == "rsd" ? r.value() : morph_inv(r, ref).value();
  }
  return show(result, approx) + "\n";
}

std::string run_complete(const Score& score, const ReferenceDelta& ref) {
  if (score.voices.empty()) return "target total: 0\n";
  std::vector<RsdValue> totals;
  totals.reserve(score.voices.size());
  for (const auto& voice : score.voices)
    totals.push_back(
        durion::onsets_rsd(durion::voice_durations(voice), ref).total);
  const RsdValue target =
      durion::longest_voice_total<durion::RsdSemiring>(totals);

  const Score done = durion::complete_score(score, ref);
  std::string out = "target total: " + target.str() + "\n";
  for (std::size_t v = 0; v < done.voices.size(); ++v) {
    out += "voice " + std::to_string(v) + ": ";
    const std::size_t had = score.voices[v].events.size();
    const auto& events = done.voices[v].events;
    if (events.size() == had) {
      out += "complete (total " + totals[v].str() + ")\n";
      continue;
    }
    out += "total " + totals[v].str() + " → " + target.str() +
           "; appended rests:";
    for (std::size_t i = had; i < events.size(); ++i)
      out += " " + events[i].duration.str();
    out += "\n";
  }
  return out;
}

std::optional<Rational> parse_delta_flag(const std::string& text) {
  if (text == "auto") return std::nullopt;
  return Rational::parse(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact symbolic duration toolkit"};
  app.require_subcommand(1);

  const CLI::Validator input_file(
      [](std::string& path) -> std::string {
        if (path == "-") return {};
        return CLI::ExistingFile(path);
      },
      "FILE");
  const CLI::Validator positive_rational(
      [](std::string& text) -> std::string {
        const auto parsed = Rational::parse(text);
        if (!parsed || parsed->is_infinite() || parsed->is_zero())
          return "expected a positive rational (p or p/q), got '" + text + "'";
        return {};
      },
      "RATIONAL");
  const CLI::Validator delta_form(
      [](std::string& text) -> std::string {
        if (text == "auto") return {};
        const auto parsed = Rational::parse(text);
        if (!parsed || parsed->is_infinite() || parsed->is_zero())
          return "expected 'auto' or a positive rational, got '" + text + "'";
        return {};
      },
      "DELTA");
  const CLI::Validator rational_or_inf(
      [](std::string& text) -> std::string {
        if (!Rational::parse(text))
          return "expected a rational (p, p/q or inf), got '" + text + "'";
        return {};
      },
      "VALUE");

  std::string in_path, out_path, reference = "4", delta = "auto";
  std::string unit = "rsd", format = "csv", value, from, to;
  std::size_t voice = 0, index = 0;
  int parts = 2;
  bool approx = false;

  const auto add_common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input)
      sub->add_option("input", in_path, "kern file, or - for stdin")
          ->required()
          ->check(input_file);
    sub->add_option("-o,--output", out_path, "output path (default stdout)");
    sub->add_option("--reference", reference,
                    "reference duration as a symbol numeral (default 4)")
        ->check(positive_rational);
  };

  CLI::App* parse_cmd =
      app.add_subcommand("parse", "list every event with both unit values");
  add_common(parse_cmd, true);
  parse_cmd->add_flag("--approx", approx, "render values as decimals");

  CLI::App* divs_cmd = app.add_subcommand(
      "divs", "encode all durations as integer multiples of one reference");
  add_common(divs_cmd, true);
  divs_cmd->add_option("--delta", delta, "'auto' or an explicit reference")
      ->check(delta_form);

  CLI::App* split_cmd = app.add_subcommand(
      "split", "split one event into equal parts and show the consequences");
  add_common(split_cmd, true);
  split_cmd->add_option("--voice", voice, "voice index")->required();
  split_cmd->add_option("--index", index, "event index inside the voice")
      ->required();
  split_cmd->add_option("--parts", parts, "number of equal parts (>= 2)")
      ->required()
      ->check(CLI::Range(2, 1 << 20));
  split_cmd->add_option("--unit", unit, "asd or rsd (default rsd)")
      ->check(CLI::IsMember({"asd", "rsd"}));

  CLI::App* roll_cmd =
      app.add_subcommand("pianoroll", "rasterize the score onto a pitch grid");
  add_common(roll_cmd, true);
  roll_cmd->add_option("--delta", delta, "'auto' or an explicit reference")
      ->check(delta_form);
  roll_cmd->add_option("--format", format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* convert_cmd =
      app.add_subcommand("convert", "convert a duration between units");
  add_common(convert_cmd, false);
  convert_cmd->add_option("--value", value, "duration (p, p/q or inf)")
      ->required()
      ->check(rational_or_inf);
  convert_cmd->add_option("--from", from, "source unit: asd or rsd")
      ->required()
      ->check(CLI::IsMember({"asd", "rsd"}));
  convert_cmd->add_option("--to", to, "target unit: asd or rsd")
      ->required()
      ->check(CLI::IsMember({"asd", "rsd"}));
  convert_cmd->add_flag("--approx", approx, "render values as decimals");

  CLI::App* complete_cmd = app.add_subcommand(
      "complete", "append rests so every voice reaches the longest total");
  add_common(complete_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const ReferenceDelta ref{*Rational::parse(reference)};
    std::string out;
    if (parse_cmd->parsed()) {
      out = run_parse(durion::parse_kern(read_input(in_path)), ref, approx);
    } else if (divs_cmd->parsed()) {
      out = durion::to_json(durion::encode_divs(
          durion::parse_kern(read_input(in_path)), parse_delta_flag(delta),
          ref));
    } else if (split_cmd->parsed()) {
      out = run_split(durion::parse_kern(read_input(in_path)), voice, index,
                      parts, unit, ref);
    } else if (roll_cmd->parsed()) {
      const durion::Pianoroll roll = durion::pianoroll(
          durion::parse_kern(read_input(in_path)), parse_delta_flag(delta),
          ref);
      out = format == "json" ? durion::to_json(roll) : durion::to_csv(roll);
    } else if (convert_cmd->parsed()) {
      out = run_convert(*Rational::parse(value), from, to, ref, approx);
    } else if (complete_cmd->parsed()) {
      out = run_complete(durion::parse_kern(read_input(in_path)), ref);
    }
    write_output(out, out_path);
    return 0;
  } catch (const durion::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const durion::unsupported_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const durion::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const durion::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
