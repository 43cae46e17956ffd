#ifndef FUSIONRIG_EXPRESSION_HPP
#define FUSIONRIG_EXPRESSION_HPP

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fusionrig/rig_witnesses.hpp"

namespace fusionrig {

/// Variable assignment for expressions; variables are single upper-case letters.
struct Bindings {
  RulesPtr rules;
  std::map<char, RawElement> vars;
  const RigModel* model = nullptr;
};

// Raw expressions:      sum := term ('+' term)*,  term := factor ('x' factor)*,
//                       factor := VAR | '0' | '1' | '(' sum ')'
// Witness expressions:  chain := wsum ('*' wsum)*,  wsum := wprod ('+' wprod)*,
//                       wprod := post ('x' post)*,   post := atom ('^-1')*,
//                       atom := NAME '(' raw (',' raw)* ')' | '(' chain ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const Bindings& env) : text_(text), env_(env) {}

  RawElement parse_raw_all() {
    RawElement r = raw_sum();
    expect_end();
    return r;
  }

  Witness parse_witness_all() {
    Witness w = chain();
    expect_end();
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) +
                     ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  /// The product operator is a lone 'x' not followed by another identifier character.
  bool peek_times() {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != 'x') return false;
    const std::size_t next = pos_ + 1;
    return next >= text_.size() ||
           !(std::islower(static_cast<unsigned char>(text_[next])) || text_[next] == '_');
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_end() {
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

  RawElement raw_sum() {
    RawElement acc = raw_term();
    while (peek('+')) {
      ++pos_;
      acc = raw_add(acc, raw_term());
    }
    return acc;
  }

  RawElement raw_term() {
    RawElement acc = raw_factor();
    while (peek_times()) {
      ++pos_;
      acc = raw_mul(acc, raw_factor());
    }
    return acc;
  }

  RawElement raw_factor() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of raw expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RawElement r = raw_sum();
      expect(')');
      return r;
    }
    if (c == '0') {
      ++pos_;
      return raw_zero(env_.rules);
    }
    if (c == '1') {
      ++pos_;
      return raw_one(env_.rules);
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      ++pos_;
      auto it = env_.vars.find(c);
      if (it == env_.vars.end()) fail(std::string("unbound variable ") + c);
      return it->second;
    }
    fail("expected a raw element");
  }

  Witness chain() {
    Witness acc = wsum();
    while (peek('*')) {
      ++pos_;
      acc = compose(acc, wsum());
    }
    return acc;
  }

  Witness wsum() {
    Witness acc = wprod();
    while (peek('+')) {
      ++pos_;
      acc = witness_add(acc, wprod());
    }
    return acc;
  }

  Witness wprod() {
    Witness acc = post();
    while (peek_times()) {
      ++pos_;
      acc = witness_mul(acc, post());
    }
    return acc;
  }

  Witness post() {
    Witness w = atom();
    while (true) {
      skip();
      if (text_.compare(pos_, 3, "^-1") != 0) break;
      pos_ += 3;
      w = invert(w);
    }
    return w;
  }

  std::string name() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::islower(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<RawElement> args() {
    expect('(');
    std::vector<RawElement> out{raw_sum()};
    while (peek(',')) {
      ++pos_;
      out.push_back(raw_sum());
    }
    expect(')');
    return out;
  }

  const RigModel& model(const std::string& who) {
    if (!env_.model) fail(who + " requires a rig model");
    return *env_.model;
  }

  Witness atom() {
    if (peek('(')) {
      ++pos_;
      Witness w = chain();
      expect(')');
      return w;
    }
    const std::string fn = name();
    if (fn.empty()) fail("expected a witness");
    const std::size_t at = pos_;
    const auto a = args();
    auto need = [&](std::size_t n) {
      if (a.size() != n) {
        pos_ = at;
        fail(fn + " takes " + std::to_string(n) + " argument(s)");
      }
    };
    if (fn == "id") return need(1), identity_witness(a[0]);
    if (fn == "alpha_plus") return need(3), alpha_plus(a[0], a[1], a[2]);
    if (fn == "lambda_plus") return need(1), lambda_plus(a[0]);
    if (fn == "rho_plus") return need(1), rho_plus(a[0]);
    if (fn == "gamma_plus") return need(2), gamma_plus(a[0], a[1]);
    if (fn == "lambda_times") return need(1), lambda_times(a[0]);
    if (fn == "rho_times") return need(1), rho_times(a[0]);
    if (fn == "delta") return need(3), delta(a[0], a[1], a[2]);
    if (fn == "delta_sharp") return need(3), delta_sharp(a[0], a[1], a[2]);
    if (fn == "epsilon") return need(1), epsilon(a[0]);
    if (fn == "alpha_times") return need(3), alpha_times(model(fn), a[0], a[1], a[2]);
    if (fn == "gamma_times") return need(2), gamma_times(model(fn), a[0], a[1]);
    if (fn == "beta") return need(2), beta(model(fn), a[0], a[1]);
    pos_ = at;
    fail("unknown witness " + fn);
  }

  std::string_view text_;
  const Bindings& env_;
  std::size_t pos_ = 0;
};

inline RawElement eval_raw(std::string_view text, const Bindings& env) {
  return ExpressionParser(text, env).parse_raw_all();
}

inline Witness eval_witness(std::string_view text, const Bindings& env) {
  return ExpressionParser(text, env).parse_witness_all();
}

/// True if the witness expression refers to alpha_times, gamma_times or beta.
inline bool uses_model(std::string_view text) {
  return text.find("alpha_times") != std::string_view::npos ||
         text.find("gamma_times") != std::string_view::npos || text.find("beta") != std::string_view::npos;
}

}  // namespace fusionrig

#endif  // FUSIONRIG_EXPRESSION_HPP
