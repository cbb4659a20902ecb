// Walkthrough of the library on a two-voice fragment: semiring arithmetic,
// the reciprocal unit change, lazy expressions, the integer encoding, the
// split-and-recompute workflow, and the pianoroll.
#include <iostream>
#include <string>

#include "durion/durion.hpp"

using namespace durion;

namespace {

const char* const kFragment =
    "**kern\t**kern\n"
    "*M4/4\t*M4/4\n"
    "=1\t=1\n"
    "8c\t2G\n"
    "16d\t.\n"
    "16c\t.\n"
    "4e\t.\n"
    "6f\t.\n"
    "6e\t.\n"
    "6d\t.\n"
    "==\t==\n"
    "*-\t*-\n";

std::string join(const std::vector<long long>& xs) {
  std::string out;
  for (const long long x : xs) {
    if (!out.empty()) out += ' ';
    out += std::to_string(x);
  }
  return out;
}

}  // namespace

int main() {
  // Two tied eighths make a quarter: concatenation is the semiring product.
  const AsdValue eighth{Rational(8)};
  std::cout << "tie(8, 8) in symbol units: " << tie(eighth, eighth).str()
            << "\n";

  // The same value in reference units (quarter = 1) via the reciprocal map.
  const ReferenceDelta quarter = ReferenceDelta::quarter();
  std::cout << "eighth note in quarter lengths: "
            << morph(eighth, quarter).str() << "\n";

  // Durations stay symbolic until a fold asks for numbers.
  const DurationExpr triplet = DurationExpr::tuplet(DurationExpr::base(4), 3);
  const DurationExpr dotted = DurationExpr::dot(DurationExpr::base(4), 1);
  std::cout << "lazy forms: " << triplet.str() << " and " << dotted.str()
            << "\n";
  std::cout << "  evaluated: asd " << eval_asd(triplet).str() << ", rsd "
            << eval_rsd(triplet, quarter).str() << "; asd "
            << eval_asd(dotted).str() << ", rsd "
            << eval_rsd(dotted, quarter).str() << "\n\n";

  // A small two-voice fragment, parsed from kern text.
  const Score score = parse_kern(kFragment);
  std::cout << "parsed " << score.voices.size() << " voices, "
            << score.voices[0].events.size() << " + "
            << score.voices[1].events.size() << " events\n";

  // Every duration as an integer multiple of one common reference.
  const DivsEncoding encoding = encode_divs(score);
  std::cout << "common divisor: " << encoding.delta.str() << "\n";
  for (std::size_t v = 0; v < encoding.divs.size(); ++v)
    std::cout << "  voice " << v << " divs: " << join(encoding.divs[v])
              << "\n";

  // Splitting one note in reference units forces a global recomputation...
  Score modified = score;
  modified.voices[0] = split_event(modified.voices[0], 2, 2);
  const DivsEncoding recomputed = encode_divs(modified);
  std::cout << "after splitting event 2 of voice 0 in halves:\n";
  std::cout << "  divisor " << encoding.delta.str() << " -> "
            << recomputed.delta.str() << ", voice 0 divs "
            << join(recomputed.divs[0]) << "\n";

  // ...while in symbol units the same edit is local: one numeral doubles.
  counters::reset();
  const Voice split_only = split_event(score.voices[0], 2, 2);
  std::cout << "  in symbol units: "
            << eval_asd(score.voices[0].events[2].duration).str() << " -> "
            << eval_asd(split_only.events[2].duration).str() << ", "
            << eval_asd(split_only.events[3].duration).str() << " with "
            << counters::rational_gcd_calls.load() << " gcd calls\n\n";

  // Completion pads the short voice with rests, then the roll rasterizes.
  const Pianoroll roll = pianoroll(score);
  std::cout << "pianoroll: " << roll.columns << " columns at "
            << roll.delta.str() << " per cell, " << roll.rows.size()
            << " pitches\n";
  std::cout << to_csv(roll);
  return 0;
}
