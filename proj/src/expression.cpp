#include "lcq/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace lcq {

namespace {

using Node = ExprNode;
using NodePtr = std::shared_ptr<const Node>;
using Kind = ExprNode::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}, double v = 0.0, std::string name = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->value = v;
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = compare();
    skip();
    if (pos_ != s_.size()) throw ExpressionError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return n;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(const char* tok) {
    skip();
    const std::size_t n = std::char_traits<char>::length(tok);
    if (s_.compare(pos_, n, tok) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) {
      if (pos_ >= s_.size()) throw ExpressionError(std::string("expected '") + c + "' but input ended", pos_);
      throw ExpressionError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  NodePtr compare() {
    NodePtr lhs = sum();
    // Two-character operators first; the UTF-8 forms are accepted as well.
    static const std::pair<const char*, Kind> ops[] = {
        {"<=", Kind::le}, {">=", Kind::ge}, {"≤", Kind::le}, {"≥", Kind::ge}, {"<", Kind::lt}, {">", Kind::gt}};
    for (const auto& [tok, kind] : ops)
      if (accept(tok)) return make(kind, {lhs, sum()});
    return lhs;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    while (true) {
      if (accept("+")) lhs = make(Kind::add, {lhs, product()});
      else if (accept("-")) lhs = make(Kind::sub, {lhs, product()});
      else return lhs;
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    while (true) {
      if (accept("*")) lhs = make(Kind::mul, {lhs, unary()});
      else if (accept("/")) lhs = make(Kind::div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept("-")) return make(Kind::negate, {unary()});
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept("^")) return make(Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ExpressionError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = compare();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) throw ExpressionError("malformed number", pos_);
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Kind::constant, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "t") return make(Kind::var_t);
      if (id == "x") return make(Kind::var_x);
      if (id == "y") return make(Kind::var_y);
      if (id == "pi") return make(Kind::constant, {}, M_PI, "pi");
      if (id == "sin" || id == "cos" || id == "exp" || id == "abs") {
        expect('(');
        NodePtr a = compare();
        expect(')');
        return make(Kind::call, {a}, 0.0, id);
      }
      if (id == "if") {
        expect('(');
        NodePtr cond = compare();
        expect(',');
        NodePtr a = compare();
        expect(',');
        NodePtr b = compare();
        expect(')');
        return make(Kind::select, {cond, a, b});
      }
      throw ExpressionError("unknown identifier '" + id + "'", start);
    }
    throw ExpressionError(std::string("unexpected '") + c + "'", pos_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double t, double x, double y) {
  auto arg = [&](int i) { return eval(*n.args[i], t, x, y); };
  switch (n.kind) {
    case Kind::constant: return n.value;
    case Kind::var_t: return t;
    case Kind::var_x: return x;
    case Kind::var_y: return y;
    case Kind::negate: return -arg(0);
    case Kind::add: return arg(0) + arg(1);
    case Kind::sub: return arg(0) - arg(1);
    case Kind::mul: return arg(0) * arg(1);
    case Kind::div: return arg(0) / arg(1);
    case Kind::pow: return std::pow(arg(0), arg(1));
    case Kind::lt: return arg(0) < arg(1) ? 1.0 : 0.0;
    case Kind::le: return arg(0) <= arg(1) ? 1.0 : 0.0;
    case Kind::gt: return arg(0) > arg(1) ? 1.0 : 0.0;
    case Kind::ge: return arg(0) >= arg(1) ? 1.0 : 0.0;
    case Kind::select: return arg(0) != 0.0 ? arg(1) : arg(2);
    case Kind::call: {
      const double a = arg(0);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "exp") return std::exp(a);
      return std::abs(a);
    }
  }
  return 0.0;
}

void print(const Node& n, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print(*n.args[0], out);
    out += op;
    print(*n.args[1], out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::constant: {
      if (n.name == "pi") {
        out += "pi";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", std::abs(n.value));
      // Parsed constants are never negative; wrap a negative value explicitly.
      if (std::signbit(n.value)) {
        out += "(-";
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      break;
    }
    case Kind::var_t: out += 't'; break;
    case Kind::var_x: out += 'x'; break;
    case Kind::var_y: out += 'y'; break;
    case Kind::negate:
      out += "(-";
      print(*n.args[0], out);
      out += ')';
      break;
    case Kind::add: bin(" + "); break;
    case Kind::sub: bin(" - "); break;
    case Kind::mul: bin(" * "); break;
    case Kind::div: bin(" / "); break;
    case Kind::pow: bin(" ^ "); break;
    case Kind::lt: bin(" < "); break;
    case Kind::le: bin(" <= "); break;
    case Kind::gt: bin(" > "); break;
    case Kind::ge: bin(" >= "); break;
    case Kind::call:
      out += n.name + "(";
      print(*n.args[0], out);
      out += ')';
      break;
    case Kind::select:
      out += "if(";
      print(*n.args[0], out);
      out += ", ";
      print(*n.args[1], out);
      out += ", ";
      print(*n.args[2], out);
      out += ')';
      break;
  }
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.source_ = text;
  return e;
}

Expression Expression::constant(double v) {
  Expression e;
  e.root_ = make(Kind::constant, {}, v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  e.source_ = buf;
  return e;
}

double Expression::operator()(double t, double x, double y) const {
  if (!root_) throw std::logic_error("Expression: evaluating an empty expression");
  return eval(*root_, t, x, y);
}

std::string Expression::to_string() const {
  std::string out;
  if (root_) print(*root_, out);
  return out;
}

}  // namespace lcq
