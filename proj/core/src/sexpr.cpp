#include "socheck/sexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "socheck/errors.hpp"

namespace socheck {

namespace {

struct Token {
  enum class Type { LParen, RParen, Symbol, Number } type;
  std::string text;
  double number = 0.0;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Token::Type::LParen, "(", 0.0, i});
      ++i;
      continue;
    }
    if (c == ')') {
      out.push_back({Token::Type::RParen, ")", 0.0, i});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
           text[j] != '(' && text[j] != ')')
      ++j;
    std::string word = text.substr(i, j - i);
    // A number starts with a digit, '.', or a sign followed by one of those.
    const bool maybe_number =
        std::isdigit(static_cast<unsigned char>(word[0])) || word[0] == '.' ||
        ((word[0] == '-' || word[0] == '+') && word.size() > 1 &&
         (std::isdigit(static_cast<unsigned char>(word[1])) || word[1] == '.'));
    if (maybe_number) {
      char* end = nullptr;
      const double v = std::strtod(word.c_str(), &end);
      if (end != word.c_str() + word.size())
        throw ParseError("bad numeric literal '" + word + "' at offset " +
                         std::to_string(i));
      out.push_back({Token::Type::Number, word, v, i});
    } else {
      out.push_back({Token::Type::Symbol, word, 0.0, i});
    }
    i = j;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expr parse() {
    Expr e = parse_expr();
    if (cursor_ != tokens_.size())
      throw ParseError("trailing tokens after expression at offset " +
                       std::to_string(tokens_[cursor_].pos));
    return e;
  }

 private:
  const Token& peek() const {
    if (cursor_ >= tokens_.size()) throw ParseError("unexpected end of input");
    return tokens_[cursor_];
  }
  Token next() {
    Token t = peek();
    ++cursor_;
    return t;
  }

  Expr parse_expr() {
    const Token t = next();
    switch (t.type) {
      case Token::Type::Number:
        return Expr::constant(t.number);
      case Token::Type::Symbol:
        return parse_atom(t);
      case Token::Type::LParen:
        return parse_form();
      case Token::Type::RParen:
        throw ParseError("unexpected ')' at offset " + std::to_string(t.pos));
    }
    throw ParseError("unreachable");
  }

  static Expr parse_atom(const Token& t) {
    if (t.text.size() >= 2 && t.text[0] == 'v') {
      int idx = -1;
      auto [p, ec] = std::from_chars(t.text.data() + 1,
                                     t.text.data() + t.text.size(), idx);
      if (ec == std::errc() && p == t.text.data() + t.text.size() && idx >= 0)
        return Expr::variable(idx);
    }
    throw ParseError("unknown symbol '" + t.text + "' at offset " +
                     std::to_string(t.pos));
  }

  Expr parse_form() {
    const Token head = next();
    if (head.type != Token::Type::Symbol)
      throw ParseError("operator expected at offset " +
                       std::to_string(head.pos));
    std::vector<Expr> args;
    while (peek().type != Token::Type::RParen) args.push_back(parse_expr());
    next();  // consume ')'

    const std::string& op = head.text;
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError("'" + op + "' expects " + std::to_string(n) +
                         " arguments, got " + std::to_string(args.size()) +
                         " at offset " + std::to_string(head.pos));
    };

    if (op == "+") {
      if (args.empty()) throw ParseError("'+' needs at least one argument");
      return Expr::sum(std::move(args));
    }
    if (op == "*") {
      if (args.empty()) throw ParseError("'*' needs at least one argument");
      Expr acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i)
        acc = Expr::product(std::move(acc), std::move(args[i]));
      return acc;
    }
    if (op == "-") {
      if (args.size() == 1) return Expr::negate(std::move(args[0]));
      need(2);
      return Expr::sum({std::move(args[0]), Expr::negate(std::move(args[1]))});
    }
    if (op == "pow") {
      need(2);
      const Expr& e = args[1];
      if (e.kind() != Expr::Kind::Constant)
        throw ParseError("'pow' exponent must be a literal integer");
      const double v = e.constant_value();
      const int k = static_cast<int>(std::lround(v));
      if (k < 1 || static_cast<double>(k) != v)
        throw ParseError("'pow' exponent must be a positive integer");
      return Expr::int_power(std::move(args[0]), k);
    }
    if (op == "abs") {
      need(1);
      return Expr::abs(std::move(args[0]));
    }
    if (op == "max") {
      need(2);
      return Expr::max(std::move(args[0]), std::move(args[1]));
    }
    if (op == "min") {
      need(2);
      return Expr::min(std::move(args[0]), std::move(args[1]));
    }
    if (op == "exp") {
      need(1);
      return Expr::exp(std::move(args[0]));
    }
    if (op == "sin") {
      need(1);
      return Expr::sin(std::move(args[0]));
    }
    if (op == "cos") {
      need(1);
      return Expr::cos(std::move(args[0]));
    }
    throw ParseError("unknown operator '" + op + "' at offset " +
                     std::to_string(head.pos));
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
};

std::string format_number(double v) {
  // Shortest representation that round-trips through strtod.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

void format_rec(const Expr& e, std::ostringstream& out) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant:
      out << format_number(e.constant_value());
      return;
    case K::Variable:
      out << 'v' << e.variable_index();
      return;
    case K::Sum: {
      out << "(+";
      for (const Expr& c : e.children()) {
        out << ' ';
        format_rec(c, out);
      }
      out << ')';
      return;
    }
    case K::Product: {
      out << "(* ";
      format_rec(e.children()[0], out);
      out << ' ';
      format_rec(e.children()[1], out);
      out << ')';
      return;
    }
    case K::Negate: {
      out << "(- ";
      format_rec(e.children()[0], out);
      out << ')';
      return;
    }
    case K::IntPower: {
      out << "(pow ";
      format_rec(e.children()[0], out);
      out << ' ' << e.exponent() << ')';
      return;
    }
    case K::Abs:
    case K::Exp:
    case K::Sin:
    case K::Cos: {
      static const char* names[] = {"abs", "exp", "sin", "cos"};
      int which = 0;
      if (e.kind() == K::Exp) which = 1;
      if (e.kind() == K::Sin) which = 2;
      if (e.kind() == K::Cos) which = 3;
      out << '(' << names[which] << ' ';
      format_rec(e.children()[0], out);
      out << ')';
      return;
    }
    case K::Max:
    case K::Min: {
      out << (e.kind() == K::Max ? "(max " : "(min ");
      format_rec(e.children()[0], out);
      out << ' ';
      format_rec(e.children()[1], out);
      out << ')';
      return;
    }
  }
}

}  // namespace

Expr parse_sexpr(const std::string& text) {
  auto tokens = tokenize(text);
  if (tokens.empty()) throw ParseError("empty expression");
  return Parser(std::move(tokens)).parse();
}

std::string format_sexpr(const Expr& e) {
  std::ostringstream out;
  format_rec(e, out);
  return out.str();
}

}  // namespace socheck
