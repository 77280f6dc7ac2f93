// Copyright 2026 The qprof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenQASM 2.0 subset reader and writer.
//
// Supported: OPENQASM 2.0 header, include "qelib1.inc" (built in, never read
// from disk), qreg/creg, gate definitions, gate application with real
// parameter expressions and register broadcast, measure, barrier, and //
// comments. opaque, if and reset raise UnsupportedFeature.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qprof/circuit.hpp"
#include "qprof/error.hpp"

namespace qprof {

namespace qasm_detail {

struct Token {
  enum class Type { Ident, Number, String, Symbol, End };
  Type type = Type::End;
  std::string text;
  double number = 0.0;
  bool integral = false;
  std::size_t line = 0;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      if (i + 1 >= n) throw SyntaxError("unterminated block comment", line);
      i += 2;
      continue;
    }
    Token t;
    t.line = line;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Token::Type::Ident;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      bool integral = true;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < n && src[j] == '.') {
        integral = false;
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < n && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(src[k]))) {
          integral = false;
          j = k;
          while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      t.type = Token::Type::Number;
      t.text = std::string(src.substr(i, j - i));
      t.integral = integral;
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc()) throw SyntaxError("bad number '" + t.text + "'", line);
      i = j;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < n && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= n || src[j] != '"') throw SyntaxError("unterminated string", line);
      t.type = Token::Type::String;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      i = j + 1;
    } else {
      t.type = Token::Type::Symbol;
      if (c == '-' && i + 1 < n && src[i + 1] == '>') {
        t.text = "->";
        i += 2;
      } else if (c == '=' && i + 1 < n && src[i + 1] == '=') {
        t.text = "==";
        i += 2;
      } else if (std::string_view(";,()[]{}+-*/^").find(c) != std::string_view::npos) {
        t.text = std::string(1, c);
        ++i;
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  out.push_back(end);
  return out;
}

/// Real-valued parameter expression.
struct Expr {
  enum class Op { Number, Param, Pi, Neg, Add, Sub, Mul, Div, Pow, Call };
  Op op = Op::Number;
  double value = 0.0;
  std::string name;  // parameter or function name
  std::vector<Expr> args;
  std::size_t line = 0;
};

using Env = std::unordered_map<std::string, double>;

inline double eval(const Expr& e, const Env& env) {
  switch (e.op) {
    case Expr::Op::Number:
      return e.value;
    case Expr::Op::Pi:
      return std::numbers::pi;
    case Expr::Op::Param: {
      auto it = env.find(e.name);
      if (it == env.end()) throw SyntaxError("unknown parameter '" + e.name + "'", e.line);
      return it->second;
    }
    case Expr::Op::Neg:
      return -eval(e.args[0], env);
    case Expr::Op::Add:
      return eval(e.args[0], env) + eval(e.args[1], env);
    case Expr::Op::Sub:
      return eval(e.args[0], env) - eval(e.args[1], env);
    case Expr::Op::Mul:
      return eval(e.args[0], env) * eval(e.args[1], env);
    case Expr::Op::Div:
      return eval(e.args[0], env) / eval(e.args[1], env);
    case Expr::Op::Pow:
      return std::pow(eval(e.args[0], env), eval(e.args[1], env));
    case Expr::Op::Call: {
      const double x = eval(e.args[0], env);
      if (e.name == "sin") return std::sin(x);
      if (e.name == "cos") return std::cos(x);
      if (e.name == "tan") return std::tan(x);
      if (e.name == "exp") return std::exp(x);
      if (e.name == "ln") return std::log(x);
      if (e.name == "sqrt") return std::sqrt(x);
      throw SyntaxError("unknown function '" + e.name + "'", e.line);
    }
  }
  return 0.0;
}

/// Operand of a statement: `reg[idx]`, or `reg` for a whole register (and
/// for plain qubit arguments inside gate bodies).
struct Arg {
  std::string reg;
  std::optional<std::size_t> index;
  std::size_t line = 0;
};

struct Application {
  std::string name;
  std::vector<Expr> params;
  std::vector<Arg> args;
  std::size_t line = 0;
  bool barrier = false;
};

struct GateDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> qargs;
  std::vector<Application> body;
};

struct Primitive {
  GateKind kind;
  std::size_t n_params;  // as written in QASM
};

inline const std::unordered_map<std::string, Primitive>& primitives() {
  static const std::unordered_map<std::string, Primitive> table = {
      {"h", {GateKind::H, 0}},      {"x", {GateKind::X, 0}},      {"y", {GateKind::Y, 0}},
      {"z", {GateKind::Z, 0}},      {"s", {GateKind::S, 0}},      {"sdg", {GateKind::Sdg, 0}},
      {"t", {GateKind::T, 0}},      {"tdg", {GateKind::Tdg, 0}},  {"rx", {GateKind::RX, 1}},
      {"ry", {GateKind::RY, 1}},    {"rz", {GateKind::RZ, 1}},    {"u3", {GateKind::U, 3}},
      {"u", {GateKind::U, 3}},      {"U", {GateKind::U, 3}},      {"u2", {GateKind::U, 2}},
      {"u1", {GateKind::RZ, 1}},    {"p", {GateKind::RZ, 1}},     {"id", {GateKind::U, 0}},
      {"sx", {GateKind::RX, 0}},    {"sxdg", {GateKind::RX, 0}},  {"cx", {GateKind::CNOT, 0}},
      {"CX", {GateKind::CNOT, 0}},  {"cz", {GateKind::CZ, 0}},    {"swap", {GateKind::SWAP, 0}},
  };
  return table;
}

/// Converts the written parameters of a primitive to the stored form.
inline std::vector<double> primitive_params(const std::string& name, std::vector<double> p) {
  constexpr double pi = std::numbers::pi;
  if (name == "u2") return {pi / 2, p[0], p[1]};
  if (name == "id") return {0.0, 0.0, 0.0};
  if (name == "sx") return {pi / 2};
  if (name == "sxdg") return {-pi / 2};
  return p;
}

// Remaining qelib1 gates, written in terms of the primitives above.
inline constexpr std::string_view kQelibPrelude = R"(
gate cy a,b { sdg b; cx a,b; s b; }
gate ch a,b { h b; sdg b; cx a,b; h b; t b; cx a,b; t b; h b; s b; x b; s a; }
gate ccx a,b,c { h c; cx b,c; tdg c; cx a,c; t c; cx b,c; tdg c; cx a,c; t b; t c; h c; cx a,b; t a; tdg b; cx a,b; }
gate cswap a,b,c { cx c,b; ccx a,b,c; cx c,b; }
gate crz(lambda) a,b { u1(lambda/2) b; cx a,b; u1(-lambda/2) b; cx a,b; }
gate crx(lambda) a,b { u1(pi/2) b; cx a,b; u3(-lambda/2,0,0) b; cx a,b; u3(lambda/2,-pi/2,0) b; }
gate cry(lambda) a,b { ry(lambda/2) b; cx a,b; ry(-lambda/2) b; cx a,b; }
gate cu1(lambda) a,b { u1(lambda/2) a; cx a,b; u1(-lambda/2) b; cx a,b; u1(lambda/2) b; }
gate cp(lambda) a,b { u1(lambda/2) a; cx a,b; u1(-lambda/2) b; cx a,b; u1(lambda/2) b; }
gate cu3(theta,phi,lambda) c,t { u1((lambda+phi)/2) c; u1((lambda-phi)/2) t; cx c,t; u3(-theta/2,0,-(phi+lambda)/2) t; cx c,t; u3(theta/2,phi,0) t; }
gate rzz(theta) a,b { cx a,b; u1(theta) b; cx a,b; }
gate rxx(theta) a,b { u3(pi/2,theta,0) a; h b; cx a,b; u1(-theta) b; cx a,b; h b; u2(-pi,pi-theta) a; }
)";

inline constexpr std::size_t kMaxInlineDepth = 64;

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  /// Parses only gate definitions (used for the built-in prelude).
  void parse_definitions(std::map<std::string, GateDef>& defs) {
    while (!at_end()) {
      expect_ident("gate");
      auto def = parse_gate_def();
      defs[def.name] = std::move(def);
    }
  }

  Circuit parse_program(std::map<std::string, GateDef> defs) {
    defs_ = std::move(defs);
    expect_ident("OPENQASM");
    const Token& v = next();
    if (v.type != Token::Type::Number || v.text != "2.0") {
      throw UnsupportedFeature("line " + std::to_string(v.line) + ": only OPENQASM 2.0 is supported");
    }
    expect_symbol(";");
    while (!at_end()) statement();
    Circuit c;
    c.n_qubits = qubit_total_;
    c.n_clbits = clbit_total_;
    c.gates = std::move(gates_);
    if (c.n_qubits == 0) throw SyntaxError("program declares no qubits", peek().line);
    return c;
  }

 private:
  struct Register {
    std::size_t offset;
    std::size_t size;
  };

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, GateDef> defs_;
  std::map<std::string, Register> qregs_;
  std::map<std::string, Register> cregs_;
  std::size_t qubit_total_ = 0;
  std::size_t clbit_total_ = 0;
  std::vector<Gate> gates_;

  bool at_end() const { return toks_[pos_].type == Token::Type::End; }
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.type != Token::Type::End) ++pos_;
    return t;
  }
  bool is_symbol(std::string_view s) const {
    return peek().type == Token::Type::Symbol && peek().text == s;
  }
  void expect_symbol(std::string_view s) {
    const Token& t = next();
    if (t.type != Token::Type::Symbol || t.text != s) {
      throw SyntaxError("expected '" + std::string(s) + "' but found '" + t.text + "'", t.line);
    }
  }
  void expect_ident(std::string_view s) {
    const Token& t = next();
    if (t.type != Token::Type::Ident || t.text != s) {
      throw SyntaxError("expected '" + std::string(s) + "' but found '" + t.text + "'", t.line);
    }
  }
  std::string ident() {
    const Token& t = next();
    if (t.type != Token::Type::Ident) throw SyntaxError("expected identifier but found '" + t.text + "'", t.line);
    return t.text;
  }
  std::size_t integer() {
    const Token& t = next();
    if (t.type != Token::Type::Number || !t.integral) throw SyntaxError("expected integer but found '" + t.text + "'", t.line);
    return static_cast<std::size_t>(t.number);
  }

  void statement() {
    const Token& t = peek();
    if (t.type != Token::Type::Ident) throw SyntaxError("unexpected '" + t.text + "'", t.line);
    const std::string& kw = t.text;
    if (kw == "include") {
      next();
      const Token& f = next();
      if (f.type != Token::Type::String) throw SyntaxError("expected file name", f.line);
      if (f.text != "qelib1.inc") throw UnsupportedFeature("line " + std::to_string(f.line) + ": include of '" + f.text + "'");
      expect_symbol(";");
    } else if (kw == "qreg" || kw == "creg") {
      next();
      const std::size_t line = t.line;
      std::string name = ident();
      expect_symbol("[");
      const std::size_t size = integer();
      expect_symbol("]");
      expect_symbol(";");
      if (qregs_.count(name) || cregs_.count(name)) throw SyntaxError("register '" + name + "' redeclared", line);
      if (size == 0) throw SyntaxError("register '" + name + "' has size 0", line);
      if (kw == "qreg") {
        qregs_[name] = {qubit_total_, size};
        qubit_total_ += size;
      } else {
        cregs_[name] = {clbit_total_, size};
        clbit_total_ += size;
      }
    } else if (kw == "gate") {
      next();
      auto def = parse_gate_def();
      defs_[def.name] = std::move(def);
    } else if (kw == "opaque" || kw == "if" || kw == "reset") {
      throw UnsupportedFeature("line " + std::to_string(t.line) + ": '" + kw + "' is not supported");
    } else if (kw == "measure") {
      next();
      Arg q = parse_arg();
      expect_symbol("->");
      Arg c = parse_arg();
      expect_symbol(";");
      emit_measure(q, c);
    } else if (kw == "barrier") {
      next();
      std::vector<Arg> args = parse_arg_list();
      expect_symbol(";");
      std::vector<Qubit> qs;
      for (const Arg& a : args) {
        for (Qubit q : resolve_all(a)) qs.push_back(q);
      }
      gates_.push_back(Gate::barrier(std::move(qs)));
    } else {
      Application app = parse_application();
      apply_top_level(app);
    }
  }

  Expr parse_expr() { return parse_additive(); }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (is_symbol("+") || is_symbol("-")) {
      const Token& op = next();
      Expr rhs = parse_multiplicative();
      Expr e;
      e.op = op.text == "+" ? Expr::Op::Add : Expr::Op::Sub;
      e.line = op.line;
      e.args = {std::move(lhs), std::move(rhs)};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (is_symbol("*") || is_symbol("/")) {
      const Token& op = next();
      Expr rhs = parse_unary();
      Expr e;
      e.op = op.text == "*" ? Expr::Op::Mul : Expr::Op::Div;
      e.line = op.line;
      e.args = {std::move(lhs), std::move(rhs)};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (is_symbol("-")) {
      const Token& op = next();
      Expr e;
      e.op = Expr::Op::Neg;
      e.line = op.line;
      e.args = {parse_unary()};
      return e;
    }
    if (is_symbol("+")) {
      next();
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (is_symbol("^")) {
      const Token& op = next();
      Expr e;
      e.op = Expr::Op::Pow;
      e.line = op.line;
      e.args = {std::move(base), parse_unary()};  // right associative
      return e;
    }
    return base;
  }

  Expr parse_primary() {
    const Token& t = next();
    Expr e;
    e.line = t.line;
    if (t.type == Token::Type::Number) {
      e.op = Expr::Op::Number;
      e.value = t.number;
      return e;
    }
    if (t.type == Token::Type::Ident) {
      if (t.text == "pi") {
        e.op = Expr::Op::Pi;
        return e;
      }
      if (is_symbol("(")) {
        next();
        e.op = Expr::Op::Call;
        e.name = t.text;
        e.args = {parse_expr()};
        expect_symbol(")");
        return e;
      }
      e.op = Expr::Op::Param;
      e.name = t.text;
      return e;
    }
    if (t.type == Token::Type::Symbol && t.text == "(") {
      Expr inner = parse_expr();
      expect_symbol(")");
      return inner;
    }
    throw SyntaxError("unexpected '" + t.text + "' in expression", t.line);
  }

  Arg parse_arg() {
    Arg a;
    a.line = peek().line;
    a.reg = ident();
    if (is_symbol("[")) {
      next();
      a.index = integer();
      expect_symbol("]");
    }
    return a;
  }

  std::vector<Arg> parse_arg_list() {
    std::vector<Arg> args{parse_arg()};
    while (is_symbol(",")) {
      next();
      args.push_back(parse_arg());
    }
    return args;
  }

  Application parse_application() {
    Application app;
    app.line = peek().line;
    app.name = ident();
    if (app.name == "barrier") app.barrier = true;
    if (is_symbol("(")) {
      next();
      if (!is_symbol(")")) {
        app.params.push_back(parse_expr());
        while (is_symbol(",")) {
          next();
          app.params.push_back(parse_expr());
        }
      }
      expect_symbol(")");
    }
    app.args = parse_arg_list();
    expect_symbol(";");
    return app;
  }

  GateDef parse_gate_def() {
    GateDef def;
    def.name = ident();
    if (is_symbol("(")) {
      next();
      if (!is_symbol(")")) {
        def.params.push_back(ident());
        while (is_symbol(",")) {
          next();
          def.params.push_back(ident());
        }
      }
      expect_symbol(")");
    }
    def.qargs.push_back(ident());
    while (is_symbol(",")) {
      next();
      def.qargs.push_back(ident());
    }
    expect_symbol("{");
    while (!is_symbol("}")) {
      if (at_end()) throw SyntaxError("unterminated gate body for '" + def.name + "'", peek().line);
      Application app = parse_application();
      for (const Arg& a : app.args) {
        if (a.index) throw SyntaxError("indexed operand inside gate body", a.line);
        if (std::find(def.qargs.begin(), def.qargs.end(), a.reg) == def.qargs.end()) {
          throw SyntaxError("unknown qubit argument '" + a.reg + "' in gate '" + def.name + "'", a.line);
        }
      }
      def.body.push_back(std::move(app));
    }
    expect_symbol("}");
    return def;
  }

  std::vector<Qubit> resolve_all(const Arg& a) const {
    auto it = qregs_.find(a.reg);
    if (it == qregs_.end()) throw SyntaxError("undeclared quantum register '" + a.reg + "'", a.line);
    const Register& r = it->second;
    if (a.index) {
      if (*a.index >= r.size) {
        throw OperandOutOfRange("line " + std::to_string(a.line) + ": " + a.reg + "[" + std::to_string(*a.index) +
                                "] exceeds register size " + std::to_string(r.size));
      }
      return {static_cast<Qubit>(r.offset + *a.index)};
    }
    std::vector<Qubit> qs(r.size);
    for (std::size_t i = 0; i < r.size; ++i) qs[i] = static_cast<Qubit>(r.offset + i);
    return qs;
  }

  void emit_measure(const Arg& q, const Arg& c) {
    auto cit = cregs_.find(c.reg);
    if (cit == cregs_.end()) throw SyntaxError("undeclared classical register '" + c.reg + "'", c.line);
    const Register& cr = cit->second;
    std::vector<Qubit> qs = resolve_all(q);
    std::vector<std::uint32_t> cs;
    if (c.index) {
      if (*c.index >= cr.size) throw OperandOutOfRange("line " + std::to_string(c.line) + ": classical bit out of range");
      cs.push_back(static_cast<std::uint32_t>(cr.offset + *c.index));
    } else {
      for (std::size_t i = 0; i < cr.size; ++i) cs.push_back(static_cast<std::uint32_t>(cr.offset + i));
    }
    if (qs.size() != cs.size()) throw SyntaxError("measure register sizes differ", q.line);
    for (std::size_t i = 0; i < qs.size(); ++i) gates_.push_back(Gate::measure(qs[i], cs[i]));
  }

  void apply_top_level(const Application& app) {
    std::vector<double> params;
    for (const Expr& e : app.params) params.push_back(eval(e, {}));
    std::vector<std::vector<Qubit>> resolved;
    std::size_t width = 1;
    for (const Arg& a : app.args) {
      resolved.push_back(resolve_all(a));
      if (!a.index) {
        const std::size_t sz = resolved.back().size();
        if (width != 1 && sz != width) throw SyntaxError("broadcast registers differ in size", a.line);
        width = sz;
      }
    }
    for (std::size_t i = 0; i < width; ++i) {
      std::vector<Qubit> qs;
      for (std::size_t k = 0; k < resolved.size(); ++k) {
        qs.push_back(app.args[k].index ? resolved[k][0] : resolved[k][i]);
      }
      invoke(app.name, params, qs, app.line, 0, {});
    }
  }

  void invoke(const std::string& name, const std::vector<double>& params, const std::vector<Qubit>& qs,
              std::size_t line, std::size_t depth, std::vector<std::string> stack) {
    if (name == "barrier") {
      gates_.push_back(Gate::barrier(qs));
      return;
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        if (qs[i] == qs[j]) throw SyntaxError("repeated operand in '" + name + "'", line);
      }
    }
    if (auto dit = defs_.find(name); dit != defs_.end()) {
      if (std::find(stack.begin(), stack.end(), name) != stack.end() || depth >= kMaxInlineDepth) {
        throw RecursionLimit("line " + std::to_string(line) + ": recursive expansion of gate '" + name + "'");
      }
      const GateDef& def = dit->second;
      if (params.size() != def.params.size() || qs.size() != def.qargs.size()) {
        throw SyntaxError("gate '" + name + "' called with wrong number of arguments", line);
      }
      Env env;
      for (std::size_t i = 0; i < params.size(); ++i) env[def.params[i]] = params[i];
      std::unordered_map<std::string, Qubit> bind;
      for (std::size_t i = 0; i < qs.size(); ++i) bind[def.qargs[i]] = qs[i];
      stack.push_back(name);
      for (const Application& sub : def.body) {
        std::vector<double> sp;
        for (const Expr& e : sub.params) sp.push_back(eval(e, env));
        std::vector<Qubit> sq;
        for (const Arg& a : sub.args) sq.push_back(bind.at(a.reg));
        invoke(sub.name, sp, sq, line, depth + 1, stack);
      }
      return;
    }
    auto pit = primitives().find(name);
    if (pit == primitives().end()) throw SyntaxError("unknown gate '" + name + "'", line);
    const Primitive& prim = pit->second;
    if (params.size() != prim.n_params) throw SyntaxError("gate '" + name + "' expects " + std::to_string(prim.n_params) + " parameters", line);
    const std::size_t arity = is_two_qubit(prim.kind) ? 2 : 1;
    if (qs.size() != arity) throw SyntaxError("gate '" + name + "' expects " + std::to_string(arity) + " operands", line);
    gates_.push_back(Gate{prim.kind, qs, primitive_params(name, params), std::nullopt});
  }
};

inline const std::map<std::string, GateDef>& prelude() {
  static const std::map<std::string, GateDef> defs = [] {
    std::map<std::string, GateDef> d;
    Parser(kQelibPrelude).parse_definitions(d);
    return d;
  }();
  return defs;
}

inline void append_number(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace qasm_detail

/// Parses an OpenQASM 2.0 program into a flat circuit. Registers are
/// concatenated in declaration order; user gates are inlined.
inline Circuit parse_qasm(std::string_view text) {
  qasm_detail::Parser p(text);
  return p.parse_program(qasm_detail::prelude());
}

struct SerializeOptions {
  bool allow_swap = true;               // emit `swap`; otherwise SWAP is unserializable
  std::vector<std::string> header;      // emitted as `// ` comment lines
};

/// QASM spelling of a gate kind ("cx", "u3", ...).
constexpr std::string_view qasm_name(GateKind k) {
  switch (k) {
    case GateKind::CNOT:
      return "cx";
    case GateKind::U:
      return "u3";
    default:
      return kind_name(k);
  }
}

inline std::string serialize_qasm(const Circuit& c, const SerializeOptions& opts = {}) {
  std::string out;
  for (const std::string& h : opts.header) out += "// " + h + "\n";
  out += "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out += "qreg q[" + std::to_string(c.n_qubits) + "];\n";
  if (c.n_clbits > 0) out += "creg c[" + std::to_string(c.n_clbits) + "];\n";
  auto qubit = [](Qubit q) { return "q[" + std::to_string(q) + "]"; };
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::Measure:
        if (!g.clbit) throw UnserializableGate("measure without a classical target");
        out += "measure " + qubit(g.qubits[0]) + " -> c[" + std::to_string(*g.clbit) + "];\n";
        continue;
      case GateKind::Barrier:
        out += "barrier ";
        break;
      case GateKind::SWAP:
        if (!opts.allow_swap) throw UnserializableGate("target dialect has no swap; decompose first");
        [[fallthrough]];
      default:
        out += qasm_name(g.kind);
        if (!g.params.empty()) {
          out += '(';
          for (std::size_t i = 0; i < g.params.size(); ++i) {
            if (i) out += ',';
            qasm_detail::append_number(out, g.params[i]);
          }
          out += ')';
        }
        out += ' ';
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) out += ',';
      out += qubit(g.qubits[i]);
    }
    out += ";\n";
  }
  return out;
}

}  // namespace qprof
