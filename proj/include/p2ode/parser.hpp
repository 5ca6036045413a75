#pragma once

// Text input: polynomial expressions, Chow ring expressions and key-value
// records describing equations, webs and curves.

#include "p2ode/chow.hpp"
#include "p2ode/webs.hpp"

#include <map>
#include <string>

namespace p2ode {

class ParseError : public DomainError {
 public:
  ParseError(const std::string& msg, int line, int column)
      : DomainError(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

/// Grammar: sums and products of integer literals,
/// variables and parenthesized subexpressions; `^` or `**` with a
/// non-negative integer exponent; `/` only by a nonzero constant. `line`
/// and `column` locate the text inside a file for error positions.
QPoly parse_polynomial(const std::string& text, const VarNames& vars, int line = 1, int column = 1);

/// Same grammar over h, hv (or ȟ), pt and integers.
ChowClass parse_chow(const std::string& text);

struct KeyValue {
  std::string value;
  int line = 0;
  int column = 0;  // column of the first character of the value
};

/// `key = value` per line; values may be double-quoted; `#` starts a
/// comment outside quotes. Duplicate keys are errors.
std::map<std::string, KeyValue> parse_key_values(const std::string& text);

std::string read_text_file(const std::string& path);

/// Equation record: a, b and either F1/F2 (in X0..A2) or A/B (chart
/// coefficients of d/dp and d/dx in x, y, p). The names `lines` and
/// `vertical` select the two model equations.
SecondOrderODE<Rationals> ode_from_record(const std::map<std::string, KeyValue>& kv);

/// Web record: k, d and either `section` (in X0..A2) or `chart` (in x, y, p).
PlaneWeb<Rationals> web_from_record(const std::map<std::string, KeyValue>& kv);

/// A curve given in X0, X1, X2 (homogeneous) or in x, y (homogenized).
QPoly parse_curve(const std::string& text);

}  // namespace p2ode
