#include <doctest.h>

#include <random>

#include "lrf/config.hpp"
#include "lrf/model.hpp"

using namespace lrf;

TEST_CASE("lattice volume and site indexing are bijective") {
  for (int d = 1; d <= 3; ++d)
    for (int l = 0; l <= 2; ++l) {
      Lattice lat = Lattice::box(d, 1, l);
      long expect = 1;
      for (int i = 0; i < d; ++i) expect *= 2 * l + 1;
      CHECK(lat.volume() == expect);
      for (long s = 0; s < lat.volume(); ++s) {
        Offset x = lat.coord(s);
        CHECK(lat.site(x) == s);
        CHECK(lat.in_window(x));
      }
    }
}

TEST_CASE("torus wrap is idempotent and centered on odd boxes") {
  Lattice lat = Lattice::box(2, 1, 2);  // side 5
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(-12, 12);
  for (int trial = 0; trial < 200; ++trial) {
    Offset x{coord(rng), coord(rng), 0};
    Offset w = lat.wrap(x);
    CHECK(lat.in_window(w));
    CHECK(lat.wrap(w) == w);
    for (int i = 0; i < 2; ++i) CHECK((w[i] - x[i]) % 5 == 0);
  }
}

TEST_CASE("kernel canonicalization carries fermionic signs") {
  InteractionKernel k;
  // swapped insertion order must land on the same signature with a sign flip
  k.add_monomial(1.0, {an({0, 0, 0}, 1), an({0, 0, 0}, 0)});
  k.add_monomial(1.0, {an({0, 0, 0}, 0), an({0, 0, 0}, 1)});
  CHECK(k.empty());  // the two cancel

  InteractionKernel p;
  p.add_monomial(1.0, {an({0, 0, 0}, 0), an({0, 0, 0}, 0)});
  CHECK(p.empty());  // a^2 = 0

  CHECK_THROWS(p.add_monomial(1.0, {an({0, 0, 0}, 0)}));  // odd signature
}

TEST_CASE("helpers build self-adjoint, even kernels") {
  CHECK(kernel_chemical_potential(0.7, 2).self_adjoint());
  CHECK(kernel_hopping(1.3, 2, 2).self_adjoint());
  CHECK(kernel_hubbard_u(4.0).self_adjoint());
  CHECK(kernel_density_density(-1.0, 1, {1, 0, 0}).self_adjoint());
  auto [re, im] = channel_pair_from_observable(pairing_observable_onsite());
  CHECK(re.self_adjoint());
  CHECK(im.self_adjoint());
  CHECK_FALSE(re.gauge_invariant());
  CHECK(kernel_hopping(1.0, 1, 1).gauge_invariant());
}

TEST_CASE("interaction norm: single-site and zero kernels") {
  Lattice lat(1, 1, 3);
  CHECK(interaction_norm(kernel_chemical_potential(0.7, 1), lat) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(interaction_norm(InteractionKernel{}, lat) == 0.0);
}

TEST_CASE("interaction norm: 1D nearest-neighbour hopping") {
  // two-site cluster operator t(a+_0 a_1 + a+_1 a_0) has eigenvalues {-t, 0, 0, +t},
  // so the exact cluster norm is t; summed over the two translates containing
  // the origin with |Lambda| = 2 the total is t
  Lattice lat(1, 1, 5);
  InteractionKernel hop = kernel_hopping(-1.0, 1, 1);  // t = 1
  CHECK(interaction_norm(hop, lat) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interaction norm: homogeneity and triangle inequality") {
  Lattice lat(1, 2, 3);
  std::mt19937 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  auto random_kernel = [&]() {
    InteractionKernel k;
    for (int i = 0; i < 3; ++i) {
      int spin = i % 2;
      Offset z{i % 2, 0, 0};
      Complex c(g(rng), g(rng));
      k.add_monomial(c, {cr({0, 0, 0}, spin), an(z, 1 - spin)});
      k.add_monomial(std::conj(c), {cr(z, 1 - spin), an({0, 0, 0}, spin)});
    }
    return k;
  };
  for (int trial = 0; trial < 5; ++trial) {
    InteractionKernel a = random_kernel(), b = random_kernel();
    double na = interaction_norm(a, lat), nb = interaction_norm(b, lat);
    double lambda = g(rng);
    CHECK(interaction_norm(lambda * a, lat) == doctest::Approx(std::abs(lambda) * na).epsilon(1e-12));
    CHECK(interaction_norm(a + b, lat) <= na + nb + 1e-12);
  }
}

namespace {

LongRangeModel bcs_model(double beta, double weight = 1.0) {
  auto [re, im] = channel_pair_from_observable(pairing_observable_onsite());
  std::vector<Channel> ch{Channel{re, im, -1, weight}};
  return LongRangeModel(Lattice(1, 2, 3), beta, InteractionKernel{}, std::move(ch));
}

}  // namespace

TEST_CASE("approximating interaction at c = 0 is the local part") {
  LongRangeModel m(Lattice(1, 1, 3), 1.0, kernel_chemical_potential(0.5, 1),
                   {Channel{kernel_density(1), InteractionKernel{}, +1, 1.0}});
  ChannelVector zero(1, Sector::Full);
  InteractionKernel phi0 = build_approximating_interaction(m, zero);
  CHECK(phi0.dump() == m.local().dump());
}

TEST_CASE("approximating interaction of the pairing channel is a pairing kernel") {
  LongRangeModel m = bcs_model(8.0);
  ChannelVector c(1, Sector::Full);
  c[0] = Complex(0.3, 0.0);
  InteractionKernel phi = build_approximating_interaction(m, c);
  CHECK(phi.self_adjoint());
  CHECK_FALSE(phi.gauge_invariant());
  CHECK(phi.quadratic());
  // amplitude proportional to |c|
  ChannelVector c2(1, Sector::Full);
  c2[0] = Complex(0.6, 0.0);
  InteractionKernel phi2 = build_approximating_interaction(m, c2);
  REQUIRE(phi.size() == phi2.size());
  for (std::size_t i = 0; i < phi.terms().size(); ++i)
    CHECK(std::abs(phi2.terms()[i].coef - 2.0 * phi.terms()[i].coef) < 1e-14);
}

TEST_CASE("approximating interaction is real-linear in c") {
  LongRangeModel m = bcs_model(4.0);
  std::mt19937 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    ChannelVector a(1, Sector::Full), b(1, Sector::Full), zero(1, Sector::Full);
    a[0] = Complex(g(rng), g(rng));
    b[0] = Complex(g(rng), g(rng));
    ChannelVector ab(1, Sector::Full);
    ab[0] = a[0] + b[0];
    InteractionKernel lhs = build_approximating_interaction(m, ab);
    lhs.axpy(-1.0, build_approximating_interaction(m, a));
    lhs.axpy(-1.0, build_approximating_interaction(m, b));
    lhs += build_approximating_interaction(m, zero);
    lhs.prune(1e-14);
    CHECK(lhs.empty());
  }
}

TEST_CASE("conjugating c matches conjugating coefficients when Phi' = 0") {
  std::vector<Channel> ch{Channel{kernel_density(1), InteractionKernel{}, -1, 1.0}};
  LongRangeModel m(Lattice(1, 1, 3), 1.0, InteractionKernel{}, std::move(ch));
  ChannelVector c(1, Sector::Full), cbar(1, Sector::Full);
  c[0] = Complex(0.4, 0.7);
  cbar[0] = std::conj(c[0]);
  InteractionKernel k1 = build_approximating_interaction(m, c);
  InteractionKernel k2 = build_approximating_interaction(m, cbar);
  REQUIRE(k1.size() == k2.size());
  for (std::size_t i = 0; i < k1.size(); ++i)
    CHECK(std::abs(k1.terms()[i].coef - std::conj(k2.terms()[i].coef)) < 1e-15);
}

TEST_CASE("split and recombine channel vectors") {
  std::vector<Channel> ch{Channel{kernel_density(1), InteractionKernel{}, -1, 1.0},
                          Channel{kernel_density(1), InteractionKernel{}, +1, 2.0}};
  LongRangeModel m(Lattice(1, 1, 3), 1.0, InteractionKernel{}, std::move(ch));
  ChannelVector c(2, Sector::Full);
  c[0] = Complex(1, 0);
  c[1] = Complex(0, 1);
  auto [minus, plus] = split_channel_vector(c, m);
  CHECK(minus[0] == Complex(1, 0));
  CHECK(minus[1] == Complex(0, 0));
  CHECK(plus[0] == Complex(0, 0));
  CHECK(plus[1] == Complex(0, 1));
  ChannelVector back = recombine(minus, plus);
  for (int k = 0; k < 2; ++k) CHECK(back[k] == c[k]);
}

TEST_CASE("all-attractive models split with an empty plus part") {
  LongRangeModel attract = bcs_model(2.0);
  ChannelVector c(1, Sector::Full);
  c[0] = Complex(2, 3);
  auto [minus, plus] = split_channel_vector(c, attract);
  CHECK(plus[0] == Complex(0, 0));
  CHECK(minus[0] == c[0]);
}

TEST_CASE("load_model: minimal config gives a channel-free model") {
  auto m = load_model("beta 2.5\nlocal { term -0.7 0 (+ 0 0) (- 0 0) }\n");
  CHECK(m.beta() == 2.5);
  CHECK(m.n_channels() == 0);
  CHECK(m.lattice().dim() == 1);
  CHECK(m.local().size() == 1);
}

TEST_CASE("load_model: bcs preset expands to the pairing-channel model") {
  auto m = load_model("preset bcs { t 0  mu 0  g 1 }\nbeta 8\n");
  CHECK(m.lattice().spins() == 2);
  REQUIRE(m.n_channels() == 1);
  CHECK(m.channels()[0].gamma == -1);
  CHECK(m.channels()[0].weight == 1.0);
  CHECK(m.channels()[0].phi.self_adjoint());
  CHECK_FALSE(m.channels()[0].phi.gauge_invariant());
  CHECK(m.permutation_invariant());
  CHECK(m.purely_attractive());
}

TEST_CASE("load_model: malformed gamma is rejected") {
  CHECK_THROWS_AS(load_model("beta 1\nchannel { gamma 0  weight 1  term 1 0 (+ 0 0) (- 0 0) }\n"),
                  ConfigError);
}

TEST_CASE("load_model: parse errors carry line and column") {
  try {
    load_model("beta 1\nlocal { term xyz 0 }\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("config:2:") != std::string::npos);
  }
}

TEST_CASE("load_model: self-adjointness violations name the kernel") {
  // a one-sided hopping term without its conjugate partner
  std::string text = "beta 1\nlocal { term 1 0 (+ 0 0) (- 0 1) }\n";
  CHECK_THROWS_WITH_AS(load_model(text), doctest::Contains("local"), std::runtime_error);
}

TEST_CASE("model hash is stable under config reserialization") {
  auto m = load_model("preset bcs { t 0.5  mu 0.2  g 1.5 }\nbeta 8\nlattice { d 1 spins 2 side 3 }\n");
  auto m2 = load_model(serialize_config(m));
  CHECK(m.hash_hex() == m2.hash_hex());
  CHECK(m.hash() == m2.hash());
}

TEST_CASE("model seminorm combines local and channel norms") {
  LongRangeModel m = bcs_model(8.0, 4.0);
  // the on-site pairing pair has |Phi| = |Phi'| = 1/2
  CHECK(m.seminorm() == doctest::Approx(4.0 * std::sqrt(0.25 + 0.25)).epsilon(1e-12));
}
