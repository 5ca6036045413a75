#include "p2ode/chow.hpp"

#include "p2ode/field.hpp"

#include <sstream>

namespace p2ode {

namespace {

constexpr int kDeg[6] = {0, 1, 1, 2, 2, 3};

// Products of basis elements, reduced with hv^2 = h hv - h^2, h^3 = 0,
// h^2 hv = h hv^2 = pt, hv^3 = 0.
ChowClass basis_product(int i, int j) {
  if (kDeg[i] + kDeg[j] > 3) return {};
  if (i > j) std::swap(i, j);
  if (i == 0) {
    ChowClass r;
    r.c[j] = 1;
    return r;
  }
  if (i == 1 && j == 1) return ChowClass::h2();
  if (i == 1 && j == 2) return ChowClass::hhv();
  if (i == 2 && j == 2) return ChowClass::hhv() - ChowClass::h2();
  if (i == 1 && j == 3) return {};              // h^3
  if (i == 1 && j == 4) return ChowClass::pt();  // h^2 hv
  if (i == 2 && j == 3) return ChowClass::pt();  // h^2 hv
  if (i == 2 && j == 4) return ChowClass::pt();  // h hv^2
  return {};
}

}  // namespace

int ChowClass::degree() const {
  int d = -1;
  for (int i = 0; i < 6; ++i) {
    if (c[i] == 0) continue;
    if (d >= 0 && d != kDeg[i]) return -2;
    d = kDeg[i];
  }
  return d;
}

bool ChowClass::is_zero() const { return degree() == -1; }

ChowClass operator+(const ChowClass& u, const ChowClass& v) {
  ChowClass r;
  for (int i = 0; i < 6; ++i) r.c[i] = u.c[i] + v.c[i];
  return r;
}

ChowClass operator-(const ChowClass& u, const ChowClass& v) {
  ChowClass r;
  for (int i = 0; i < 6; ++i) r.c[i] = u.c[i] - v.c[i];
  return r;
}

ChowClass operator*(std::int64_t s, const ChowClass& u) {
  ChowClass r;
  for (int i = 0; i < 6; ++i) r.c[i] = s * u.c[i];
  return r;
}

ChowClass operator*(const ChowClass& u, const ChowClass& v) {
  ChowClass r;
  for (int i = 0; i < 6; ++i) {
    if (!u.c[i]) continue;
    for (int j = 0; j < 6; ++j) {
      if (!v.c[j]) continue;
      r = r + (u.c[i] * v.c[j]) * basis_product(i, j);
    }
  }
  return r;
}

std::string ChowClass::to_string() const {
  static const char* names[6] = {"1", "h", "hv", "h^2", "h*hv", "pt"};
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < 6; ++i) {
    if (!c[i]) continue;
    std::int64_t v = c[i];
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    std::int64_t a = v < 0 ? -v : v;
    if (i == 0) os << a;
    else {
      if (a != 1) os << a << "*";
      os << names[i];
    }
    first = false;
  }
  return first ? "0" : os.str();
}

std::int64_t intersection_number(const ChowClass& u) {
  int d = u.degree();
  if (d != 3 && d != -1) throw DomainError("intersection number needs a class of degree 3");
  return u.c[5];
}

ChowClass tangency_class_surface(Bidegree f, const ChowClass& surface) {
  if (surface.degree() != 1 || surface.c[1] < 0 || surface.c[2] < 0)
    throw DomainError("surface class must be a*h + b*hv with a, b >= 0, not both zero");
  return (f.divisor() + surface) * surface;
}

std::int64_t tangency_count_curve(Bidegree f, const ChowClass& curve, std::int64_t euler) {
  ChowClass det = bundles::kContactNormal.divisor();
  return intersection_number(f.divisor() * curve) + intersection_number(det * curve) - euler;
}

Bidegree tangency_class_pair(Bidegree f1, Bidegree f2) { return {f1.a + f2.a + 1, f1.b + f2.b + 1}; }

std::int64_t dim_sections(int a, int b, bool* extrapolated) {
  if (extrapolated) *extrapolated = a < 0 || b < 0;
  if (a < 0 || b < 0) return 0;
  std::int64_t A = a, B = b;
  return (A + 1) * (B + 1) * (A + B + 2) / 2;
}

std::int64_t dim_ode_space(int a, int b) {
  if (a < 1 || b < 1) throw DomainError("dimension of E(a,b) is only available for a, b >= 1");
  std::int64_t A = a, B = b;
  return (2 * A * A * B + 2 * A * B * B + 3 * A * A + 3 * B * B + 12 * A * B + 9 * A + 9 * B) / 2 - 1;
}

ChowClass web_lift_class(int k, int d) {
  if (k < 1) throw DomainError("a web needs k >= 1");
  if (d < 0) throw DomainError("web degree must be non-negative");
  return ChowClass::divisor(d, k);
}

}  // namespace p2ode
