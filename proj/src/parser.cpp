#include "p2ode/parser.hpp"

#include "p2ode/invariants.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace p2ode {

namespace {

// Recursive descent over a value type V supplied through callbacks.
template <class V>
struct Grammar {
  std::function<V(const mpz_class&)> literal;
  std::function<std::optional<V>(const std::string&)> identifier;
  std::function<V(const V&, const V&)> add, sub, mul;
  std::function<V(const V&)> neg;
  std::function<std::optional<V>(const V&, const V&)> div;  // nullopt: not allowed
  std::function<V(const V&, unsigned long)> pow;
};

template <class V>
class Parser {
 public:
  Parser(const std::string& s, const Grammar<V>& g, int line, int column) : s_(s), g_(g), line_(line), col_(column) {}

  V parse() {
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    V v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at = std::string::npos) const {
    if (at == std::string::npos) at = pos_;
    int line = line_, col = col_;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s_[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(const char* tok) {
    skip();
    std::size_t n = std::char_traits<char>::length(tok);
    if (s_.compare(pos_, n, tok) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  V expr() {
    V v = term();
    for (;;) {
      if (eat("+"))
        v = g_.add(v, term());
      else if (eat("-"))
        v = g_.sub(v, term());
      else
        return v;
    }
  }

  V term() {
    V v = unary();
    for (;;) {
      skip();
      if (s_.compare(pos_, 2, "**") != 0 && eat("*")) {
        v = g_.mul(v, unary());
      } else if (eat("/")) {
        skip();
        std::size_t at = pos_;
        auto q = g_.div(v, unary());
        if (!q) fail("division is only allowed by a nonzero constant", at);
        v = *q;
      } else {
        return v;
      }
    }
  }

  V unary() {
    if (eat("-")) return g_.neg(unary());
    if (eat("+")) return unary();
    return power();
  }

  V power() {
    V base = atom();
    if (eat("^") || eat("**")) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      if (pos_ - start > 4) fail("exponent too large", start);
      return g_.pow(base, std::stoul(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  V atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      V v = expr();
      if (!eat(")")) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return g_.literal(mpz_class(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (static_cast<unsigned char>(c) & 0x80)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                  (static_cast<unsigned char>(s_[pos_]) & 0x80)))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto v = g_.identifier(name);
      if (!v) fail("unknown identifier '" + name + "'", start);
      return *v;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const Grammar<V>& g_;
  int line_, col_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int int_field(const std::map<std::string, KeyValue>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw DomainError("missing key '" + key + "'");
  const auto& v = it->second;
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v.value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.value.size()) throw ParseError("'" + key + "' must be an integer", v.line, v.column);
  return out;
}

std::optional<QPoly> optional_poly(const std::map<std::string, KeyValue>& kv, const std::string& key,
                                   const VarNames& vars) {
  auto it = kv.find(key);
  if (it == kv.end()) return std::nullopt;
  return parse_polynomial(it->second.value, vars, it->second.line, it->second.column);
}

}  // namespace

QPoly parse_polynomial(const std::string& text, const VarNames& vars, int line, int column) {
  const Rationals QQ;
  Grammar<QPoly> g;
  g.literal = [&](const mpz_class& z) { return QPoly::constant(QQ, vars, mpq_class(z)); };
  g.identifier = [&](const std::string& name) -> std::optional<QPoly> {
    for (std::size_t i = 0; i < vars->size(); ++i)
      if ((*vars)[i] == name) return QPoly::variable(QQ, vars, i);
    return std::nullopt;
  };
  g.add = [](const QPoly& a, const QPoly& b) { return a + b; };
  g.sub = [](const QPoly& a, const QPoly& b) { return a - b; };
  g.mul = [](const QPoly& a, const QPoly& b) { return a * b; };
  g.neg = [](const QPoly& a) { return -a; };
  g.div = [&](const QPoly& a, const QPoly& b) -> std::optional<QPoly> {
    if (!b.is_constant() || b.is_zero()) return std::nullopt;
    return a.scaled(QQ.inv(b.coeff(Monomial{})));
  };
  g.pow = [](const QPoly& a, unsigned long n) { return a.pow(static_cast<unsigned>(n)); };
  return Parser<QPoly>(text, g, line, column).parse();
}

ChowClass parse_chow(const std::string& text) {
  Grammar<ChowClass> g;
  g.literal = [](const mpz_class& z) {
    if (!z.fits_slong_p()) throw DomainError("integer literal out of range");
    return z.get_si() * ChowClass::one();
  };
  g.identifier = [](const std::string& name) -> std::optional<ChowClass> {
    if (name == "h") return ChowClass::h();
    if (name == "hv" || name == "ȟ") return ChowClass::hv();
    if (name == "pt") return ChowClass::pt();
    return std::nullopt;
  };
  g.add = [](const ChowClass& a, const ChowClass& b) { return a + b; };
  g.sub = [](const ChowClass& a, const ChowClass& b) { return a - b; };
  g.mul = [](const ChowClass& a, const ChowClass& b) { return a * b; };
  g.neg = [](const ChowClass& a) { return -1 * a; };
  g.div = [](const ChowClass&, const ChowClass&) -> std::optional<ChowClass> { return std::nullopt; };
  g.pow = [](const ChowClass& a, unsigned long n) {
    ChowClass r = ChowClass::one();
    for (unsigned long i = 0; i < n && !r.is_zero(); ++i) r = r * a;
    return r;
  };
  return Parser<ChowClass>(text, g, 1, 1).parse();
}

std::map<std::string, KeyValue> parse_key_values(const std::string& text) {
  std::map<std::string, KeyValue> out;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::size_t i = raw.find_first_not_of(" \t\r");
    if (i == std::string::npos || raw[i] == '#') continue;
    std::size_t eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno, static_cast<int>(i) + 1);
    std::string key = trim(raw.substr(i, eq - i));
    if (key.empty()) throw ParseError("empty key", lineno, static_cast<int>(i) + 1);
    for (char c : key)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw ParseError("invalid key '" + key + "'", lineno, static_cast<int>(i) + 1);
    std::size_t v = raw.find_first_not_of(" \t", eq + 1);
    KeyValue kv;
    kv.line = lineno;
    if (v == std::string::npos) throw ParseError("missing value for '" + key + "'", lineno, static_cast<int>(eq) + 2);
    if (raw[v] == '"') {
      std::size_t close = raw.find('"', v + 1);
      if (close == std::string::npos) throw ParseError("unterminated string", lineno, static_cast<int>(v) + 1);
      std::string rest = trim(raw.substr(close + 1));
      if (!rest.empty() && rest[0] != '#')
        throw ParseError("unexpected text after string", lineno, static_cast<int>(close) + 2);
      kv.value = raw.substr(v + 1, close - v - 1);
      kv.column = static_cast<int>(v) + 2;
    } else {
      std::size_t hash = raw.find('#', v);
      kv.value = trim(raw.substr(v, hash == std::string::npos ? std::string::npos : hash - v));
      kv.column = static_cast<int>(v) + 1;
    }
    if (!out.emplace(key, kv).second) throw ParseError("duplicate key '" + key + "'", lineno, static_cast<int>(i) + 1);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SecondOrderODE<Rationals> ode_from_record(const std::map<std::string, KeyValue>& kv) {
  const Rationals QQ;
  if (auto it = kv.find("name"); it != kv.end()) {
    if (it->second.value == "lines") return lines_ode(QQ);
    if (it->second.value == "vertical") return vertical_ode(QQ);
    throw ParseError("unknown equation name '" + it->second.value + "'", it->second.line, it->second.column);
  }
  const int a = int_field(kv, "a"), b = int_field(kv, "b");
  auto F1 = optional_poly(kv, "F1", incidence_vars());
  auto F2 = optional_poly(kv, "F2", incidence_vars());
  auto A = optional_poly(kv, "A", chart_vars());
  auto B = optional_poly(kv, "B", chart_vars());
  if ((F1 || F2) && (A || B)) throw DomainError("give either F1/F2 or chart A/B, not both");
  if (A || B) {
    auto e = ode_from_chart(a, b, A ? *A : QPoly(QQ, chart_vars()), B ? *B : QPoly(QQ, chart_vars()));
    if (!e) throw DomainError("chart data (A, B) is not an equation of bidegree (" + std::to_string(a) + "," +
                              std::to_string(b) + ")");
    return *e;
  }
  if (!F1 && !F2) throw DomainError("equation record needs F1/F2 or A/B");
  return build_ode(a, b, F1 ? *F1 : QPoly(QQ, incidence_vars()), F2 ? *F2 : QPoly(QQ, incidence_vars()));
}

PlaneWeb<Rationals> web_from_record(const std::map<std::string, KeyValue>& kv) {
  const int k = int_field(kv, "k"), d = int_field(kv, "d");
  auto s = optional_poly(kv, "section", incidence_vars());
  auto c = optional_poly(kv, "chart", chart_vars());
  if (s && c) throw DomainError("give either section or chart, not both");
  if (c) return web_from_chart(k, d, *c);
  if (!s) throw DomainError("web record needs section or chart");
  return build_web(reduce_mod_incidence(*s, d, k));
}

QPoly parse_curve(const std::string& text) {
  static const VarNames plane = make_vars({"X0", "X1", "X2"});
  static const VarNames affine = make_vars({"x", "y"});
  const Rationals QQ;
  try {
    QPoly g = parse_polynomial(text, plane);
    std::vector<QPoly> images;
    for (std::size_t i = 0; i < 3; ++i) images.push_back(QPoly::variable(QQ, incidence_vars(), kX0 + i));
    QPoly G = g.compose(images);
    curve_degree(G);
    return G;
  } catch (const ParseError& homogeneous_error) {
    std::optional<QPoly> f;
    try {
      f = parse_polynomial(text, affine);
    } catch (const ParseError& affine_error) {
      // Report whichever reading got further.
      bool later = affine_error.line() > homogeneous_error.line() ||
                   (affine_error.line() == homogeneous_error.line() && affine_error.column() > homogeneous_error.column());
      if (later) throw;
      throw homogeneous_error;
    }
    QPoly fc = f->compose({QPoly::variable(QQ, chart_vars(), kx), QPoly::variable(QQ, chart_vars(), ky)});
    if (fc.is_constant()) throw DomainError("curve equation must be nonconstant");
    return homogenize_curve(fc);
  }
}

}  // namespace p2ode
