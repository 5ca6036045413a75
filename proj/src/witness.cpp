#include "p2ode/witness.hpp"

namespace p2ode {

int WitnessResult::exit_code() const {
  int a = web_certificate.exit_code(), b = ode_certificate.exit_code();
  if (a == 1 || b == 1) return 1;
  return (a == 0 && b == 0) ? 0 : 2;
}

WitnessResult genericity_witness(int a, int b, int r, std::uint64_t seed, WitnessMode mode, const ScreenOptions& base) {
  if (mode == WitnessMode::V && (a < 3 || b < 1)) throw DomainError("V-construction needs a >= 3 and b >= 1");
  if (mode == WitnessMode::L && (a < 3 || b < 3)) throw DomainError("L-construction needs a >= 3 and b >= 3");
  if (r < 1) throw DomainError("degree bound r must be at least 1");
  const Rationals QQ;
  std::mt19937_64 rng(seed);
  ScreenOptions opt = base;
  opt.r = r;
  const std::string tag = mode == WitnessMode::V ? "V" : "L";
  std::optional<WitnessResult> last;
  for (int attempt = 1; attempt <= kWitnessRetries; ++attempt) {
    const int k = mode == WitnessMode::V ? b + 2 : b - 1;
    const int d = mode == WitnessMode::V ? a - 1 : a + 2;
    auto web = random_web(QQ, k, d, rng);
    SecondOrderODE<Rationals> ode =
        mode == WitnessMode::V ? build_ode(BiHomPoly<Rationals>(QQ, a + 2, b - 1), web.section)
                               : build_ode(web.section, BiHomPoly<Rationals>(QQ, a - 1, b + 2));
    auto wc = screen_finite_field(web, opt, ScreenTargets{true, mode == WitnessMode::L});
    auto oc = screen_finite_field(ode, opt,
                                  mode == WitnessMode::V ? ScreenTargets{true, false} : ScreenTargets{false, true});
    for (auto* c : {&wc, &oc}) {
      c->seed = seed;
      c->construction = tag + "-construction witness for E(" + std::to_string(a) + "," + std::to_string(b) +
                        "), attempt " + std::to_string(attempt);
    }
    WitnessResult res{mode, std::move(ode), std::move(web), std::move(wc), std::move(oc), attempt};
    if (res.exit_code() != 1) return res;
    last = std::move(res);
  }
  return std::move(*last);
}

ProductWitness product_web_witness(int k, int d, std::uint64_t seed) {
  if (k < 2) throw DomainError("product witness needs k >= 2");
  if (d < 2) throw DomainError("product witness needs d >= 2");
  const Rationals QQ;
  std::mt19937_64 rng(seed);
  auto mono = [](std::array<int, 6> e) {
    Monomial m;
    for (int i = 0; i < 6; ++i) m.exp[i] = static_cast<std::uint16_t>(e[i]);
    return m;
  };
  const int kf = k - 1;
  // Chart images: X0^d A2^kf -> 1, X0^d A1 A2^(kf-1) -> -p, X0^(d-1) X1 A2^kf -> x.
  const Monomial one_m = mono({d, 0, 0, 0, 0, kf});
  const Monomial p_m = mono({d, 0, 0, 0, 1, kf - 1});
  const Monomial x_m = mono({d - 1, 1, 0, 0, 0, kf});
  const std::vector<mpq_class> origin{0, 0, 0};
  for (int attempt = 1; attempt <= kWitnessRetries; ++attempt) {
    auto w = random_web(QQ, kf, d, rng);
    // Plant a singular point of the lifted foliation at x = y = p = 0:
    // a_0(0,0) = a_1(0,0) = d a_0/dx (0,0) = 0.
    QPoly a0 = w.chart_coeffs[0], a1 = w.chart_coeffs.size() > 1 ? w.chart_coeffs[1] : QPoly(QQ, chart_vars());
    mpq_class v0 = a0.evaluate(origin), v1 = a1.evaluate(origin), vx = a0.derivative(kx).evaluate(origin);
    QPoly s = w.section.poly;
    s.add_term(one_m, -v0);
    s.add_term(p_m, v1);
    s.add_term(x_m, -vx);
    std::optional<PlaneWeb<Rationals>> factor;
    try {
      factor = build_web(reduce_mod_incidence(s, d, kf));
    } catch (const DomainError&) {
      continue;
    }
    // The singular point lies over X = (1, 0, 0) with tangent line A = (0, 0, 1);
    // the pencil through c avoids it when A . c = c2 != 0.
    Point3<Rationals> c{random_coefficient(rng, 5), random_coefficient(rng, 5), 1 + static_cast<long>(rng() % 5)};
    auto pencil = pencil_web(QQ, c);
    auto product = web_product(*factor, pencil);
    ProductWitness out{*factor, pencil, product, c, {0, 0, 0}};
    out.attempts = attempt;
    out.factor_singular = in_singular_locus(web_singular_locus(*factor), origin);
    out.pencil_avoids = pencil.chart().evaluate(origin) != 0;
    out.product_singular = in_singular_locus(web_singular_locus(product), origin);
    if (out.factor_singular && out.pencil_avoids) return out;
  }
  throw DomainError("avoidance condition not met after " + std::to_string(kWitnessRetries) + " attempts");
}

}  // namespace p2ode
