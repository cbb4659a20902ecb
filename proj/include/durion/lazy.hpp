#pragma once

#include <charconv>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "durion/counters.hpp"
#include "durion/errors.hpp"
#include "durion/modifiers.hpp"
#include "durion/rational.hpp"
#include "durion/semiring.hpp"

namespace durion {

/// Unevaluated duration: an immutable tree of modifier applications over
/// base note symbols. Leaves are restricted to the eight plain symbols
/// {2^n | n in 0..7} plus the grace leaf; everything else is expressed by
/// modifiers. No arithmetic happens until an eval_* fold is requested.
class DurationExpr {
 public:
  enum class Kind { base, grace, dot, tuplet, tie, repeat };

  static DurationExpr base(int symbol) {
    if (!is_base_symbol(symbol))
      throw domain_error("base symbol must be a power of two in [1, 128]");
    return DurationExpr(Node{Kind::base, symbol, Rational(), nullptr, nullptr});
  }

  static DurationExpr grace() {
    return DurationExpr(Node{Kind::grace, 0, Rational(), nullptr, nullptr});
  }

  static DurationExpr dot(DurationExpr inner, int count) {
    if (count < 1) throw domain_error("dot count must be at least 1");
    return DurationExpr(
        Node{Kind::dot, count, Rational(), std::move(inner.node_), nullptr});
  }

  static DurationExpr tuplet(DurationExpr inner, int gamma) {
    if (gamma < 3) throw domain_error("tuplet ratio must be at least 3");
    return DurationExpr(
        Node{Kind::tuplet, gamma, Rational(), std::move(inner.node_), nullptr});
  }

  static DurationExpr tie(DurationExpr left, DurationExpr right) {
    return DurationExpr(Node{Kind::tie, 0, Rational(), std::move(left.node_),
                             std::move(right.node_)});
  }

  static DurationExpr repeat(DurationExpr inner, Rational scalar) {
    if (scalar.is_zero() || scalar.is_infinite())
      throw domain_error("repeat scalar must be positive and finite");
    return DurationExpr(Node{Kind::repeat, 0, std::move(scalar),
                             std::move(inner.node_), nullptr});
  }

  static bool is_base_symbol(int symbol) {
    return symbol >= 1 && symbol <= 128 && (symbol & (symbol - 1)) == 0;
  }

  Kind kind() const { return node_->kind; }
  int base_symbol() const { return node_->number; }
  int dot_count() const { return node_->number; }
  int tuplet_gamma() const { return node_->number; }
  const Rational& repeat_scalar() const { return node_->scalar; }
  DurationExpr inner() const { return DurationExpr(node_->a); }
  DurationExpr left() const { return DurationExpr(node_->a); }
  DurationExpr right() const { return DurationExpr(node_->b); }

  /// Canonical text: `8`, `grace`, `dot(8,1)`, `tuplet(8,3)`, `tie(8,8)`,
  /// `repeat(4,1/2)`. parse() reads it back exactly.
  std::string str() const {
    switch (node_->kind) {
      case Kind::base: return std::to_string(node_->number);
      case Kind::grace: return "grace";
      case Kind::dot:
        return "dot(" + inner().str() + "," + std::to_string(node_->number) +
               ")";
      case Kind::tuplet:
        return "tuplet(" + inner().str() + "," +
               std::to_string(node_->number) + ")";
      case Kind::tie: return "tie(" + left().str() + "," + right().str() + ")";
      case Kind::repeat:
        return "repeat(" + inner().str() + "," + node_->scalar.str() + ")";
    }
    throw error("unreachable expression kind");
  }

  static DurationExpr parse(std::string_view text);

  friend bool operator==(const DurationExpr& x, const DurationExpr& y) {
    if (x.node_ == y.node_) return true;
    if (x.node_->kind != y.node_->kind) return false;
    switch (x.node_->kind) {
      case Kind::base: return x.node_->number == y.node_->number;
      case Kind::grace: return true;
      case Kind::dot:
      case Kind::tuplet:
        return x.node_->number == y.node_->number && x.inner() == y.inner();
      case Kind::tie: return x.left() == y.left() && x.right() == y.right();
      case Kind::repeat:
        return x.node_->scalar == y.node_->scalar && x.inner() == y.inner();
    }
    return false;
  }

 private:
  struct Node {
    Kind kind;
    int number;       // base symbol, dot count, or tuplet ratio
    Rational scalar;  // repeat only
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };

  explicit DurationExpr(Node node)
      : node_(std::make_shared<const Node>(std::move(node))) {}

  explicit DurationExpr(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Lower to symbol units. Counted per visited node so tests can prove where
/// evaluation does and does not happen.
inline AsdValue eval_asd(const DurationExpr& e) {
  counters::duration_folds.fetch_add(1, std::memory_order_relaxed);
  switch (e.kind()) {
    case DurationExpr::Kind::base:
      return AsdValue(Rational(e.base_symbol()));
    case DurationExpr::Kind::grace: return AsdValue::grace();
    case DurationExpr::Kind::dot: return dot(eval_asd(e.inner()), e.dot_count());
    case DurationExpr::Kind::tuplet:
      return tuplet(eval_asd(e.inner()), e.tuplet_gamma());
    case DurationExpr::Kind::tie:
      return tie(eval_asd(e.left()), eval_asd(e.right()));
    case DurationExpr::Kind::repeat:
      return asd_repeat(eval_asd(e.inner()), e.repeat_scalar());
  }
  throw error("unreachable expression kind");
}

/// Lower to reference units: the same fold with leaves morphed and the
/// other semiring's modifiers. Agrees with morph(eval_asd(e), delta) on
/// every tree.
inline RsdValue eval_rsd(const DurationExpr& e, const ReferenceDelta& delta) {
  counters::duration_folds.fetch_add(1, std::memory_order_relaxed);
  switch (e.kind()) {
    case DurationExpr::Kind::base:
      return morph(AsdValue(Rational(e.base_symbol())), delta);
    case DurationExpr::Kind::grace: return RsdValue::grace();
    case DurationExpr::Kind::dot:
      return dot(eval_rsd(e.inner(), delta), e.dot_count());
    case DurationExpr::Kind::tuplet:
      return tuplet(eval_rsd(e.inner(), delta), e.tuplet_gamma());
    case DurationExpr::Kind::tie:
      return tie(eval_rsd(e.left(), delta), eval_rsd(e.right(), delta));
    case DurationExpr::Kind::repeat:
      return rsd_repeat(eval_rsd(e.inner(), delta), e.repeat_scalar());
  }
  throw error("unreachable expression kind");
}

/// True when the tree lowers to a finite integer in symbol units: the
/// predicate behind preferring symbol units for graphical edits.
inline bool is_integral_asd(const DurationExpr& e) {
  const AsdValue v = eval_asd(e);
  return !v.is_grace() && v.value().is_integer();
}

enum class TaskKind { graphical_edit, cross_measure, pianoroll, onset_fold };

/// How a pipeline lowers lazy durations: pinned to one unit system, or
/// resolved per task.
class EvalStrategy {
 public:
  enum class Mode { force_asd, force_rsd, automatic };

  static EvalStrategy asd() { return EvalStrategy(Mode::force_asd, {}); }
  static EvalStrategy rsd(ReferenceDelta delta) {
    return EvalStrategy(Mode::force_rsd, std::move(delta));
  }
  static EvalStrategy automatic() {
    return EvalStrategy(Mode::automatic, {});
  }

  Mode mode() const { return mode_; }

  const ReferenceDelta& delta() const {
    if (!delta_) throw error("strategy carries no reference delta");
    return *delta_;
  }

 private:
  EvalStrategy(Mode mode, std::optional<ReferenceDelta> delta)
      : mode_(mode), delta_(std::move(delta)) {}

  Mode mode_;
  std::optional<ReferenceDelta> delta_;
};

/// Deterministic task table. Graphical edits stay in symbol units, where
/// plain and tuplet symbols keep integer values and no common divisor is
/// ever computed; everything that measures spans runs in reference units.
/// The expression list is accepted so callers state what they are about to
/// lower, but the table does not inspect it.
template <class ExprRange>
EvalStrategy choose_strategy(const ExprRange& exprs, TaskKind task,
                             ReferenceDelta delta = ReferenceDelta::quarter()) {
  (void)exprs;
  switch (task) {
    case TaskKind::graphical_edit: return EvalStrategy::asd();
    case TaskKind::cross_measure:
    case TaskKind::pianoroll:
    case TaskKind::onset_fold: return EvalStrategy::rsd(std::move(delta));
  }
  throw error("unreachable task kind");
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  DurationExpr run() {
    DurationExpr e = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw parse_error("trailing input after duration expression");
    return e;
  }

 private:
  DurationExpr expr() {
    skip_ws();
    if (pos_ >= s_.size()) throw parse_error("empty duration expression");
    if (is_digit(s_[pos_])) {
      const int symbol = integer();
      if (!DurationExpr::is_base_symbol(symbol))
        throw parse_error("'" + std::to_string(symbol) +
                          "' is not a base symbol");
      return DurationExpr::base(symbol);
    }
    const std::string_view word = identifier();
    if (word == "grace") return DurationExpr::grace();
    if (word == "dot") {
      expect('(');
      DurationExpr inner = expr();
      expect(',');
      const int count = integer();
      expect(')');
      if (count < 1) throw parse_error("dot count must be at least 1");
      return DurationExpr::dot(std::move(inner), count);
    }
    if (word == "tuplet") {
      expect('(');
      DurationExpr inner = expr();
      expect(',');
      const int gamma = integer();
      expect(')');
      if (gamma < 3) throw parse_error("tuplet ratio must be at least 3");
      return DurationExpr::tuplet(std::move(inner), gamma);
    }
    if (word == "tie") {
      expect('(');
      DurationExpr left = expr();
      expect(',');
      DurationExpr right = expr();
      expect(')');
      return DurationExpr::tie(std::move(left), std::move(right));
    }
    if (word == "repeat") {
      expect('(');
      DurationExpr inner = expr();
      expect(',');
      const Rational scalar = rational();
      expect(')');
      if (scalar.is_zero())
        throw parse_error("repeat scalar must be positive");
      return DurationExpr::repeat(std::move(inner), scalar);
    }
    throw parse_error("unknown duration constructor '" + std::string(word) +
                      "'");
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c)
      throw parse_error(std::string("expected '") + c +
                        "' in duration expression");
    ++pos_;
  }

  int integer() {
    skip_ws();
    int value = 0;
    const auto begin = s_.data() + pos_;
    const auto [end, ec] = std::from_chars(begin, s_.data() + s_.size(), value);
    if (ec != std::errc() || end == begin)
      throw parse_error("expected an integer in duration expression");
    pos_ = static_cast<std::size_t>(end - s_.data());
    return value;
  }

  Rational rational() {
    const int num = integer();
    if (num < 0) throw parse_error("expected a non-negative rational");
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      const int den = integer();
      if (den <= 0) throw parse_error("rational denominator must be positive");
      return Rational(BigInt(num), BigInt(den));
    }
    return Rational(num);
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= 'a' && s_[pos_] <= 'z') ++pos_;
    if (pos_ == start)
      throw parse_error("expected a duration expression");
    return s_.substr(start, pos_ - start);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline DurationExpr DurationExpr::parse(std::string_view text) {
  return detail::ExprParser(text).run();
}

}  // namespace durion
