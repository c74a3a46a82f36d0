#include "qu8it/io.hpp"

#include <gtest/gtest.h>

using namespace qu8it;

TEST(Io, ConfigRoundTrip) {
  RunConfig c;
  c.command = "evolve";
  c.params = LatticeParams{.L = 2, .nf = 1, .masses = {0.25}, .g = 1.5, .h = 3.0, .include_h = true};
  c.t = 2.5;
  c.steps = 40;
  c.order = 2;
  c.state = "2,5b,1,8b";
  c.sector = 1.0 / 3;
  c.sections = {"algebra", "lattice"};
  c.tol.identity = 1e-12;
  const auto back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(back, c);
}

TEST(Io, ConfigSectorAsRationalString) {
  const auto c = config_from_json(nlohmann::json::parse(R"({"sector": "-2/3", "params": {"L": 3}})"));
  ASSERT_TRUE(c.sector.has_value());
  EXPECT_DOUBLE_EQ(*c.sector, -2.0 / 3);
  EXPECT_EQ(c.params.L, 3);
  EXPECT_EQ(c.params.nf, 1);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"steps": "ten"})")), Error);
}

TEST(Io, RationalParsing) {
  EXPECT_DOUBLE_EQ(parse_rational("1/3"), 1.0 / 3);
  EXPECT_DOUBLE_EQ(parse_rational("-1"), -1.0);
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(Io, StateSpecs) {
  const LatticeParams p{.L = 1};
  const auto s = parse_state_spec("2,5b", p);
  EXPECT_EQ(s.labels, (std::vector<int>{2, 5}));
  EXPECT_EQ(parse_state_spec("8,1\xCC\x84", p).labels, (std::vector<int>{8, 1}));
  EXPECT_EQ(parse_state_spec("vac", p).labels, (std::vector<int>{1, 1}));
  const auto g = parse_state_spec("gs:B=1/3", p);
  EXPECT_EQ(g.kind, StateSpec::Kind::ground);
  EXPECT_DOUBLE_EQ(*g.sector, 1.0 / 3);
  for (const char* bad : {"2b,5", "2,9", "2", "2,5,1", "2,5x", "gs:C=0"}) {
    try {
      parse_state_spec(bad, p);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadStateSpec) << bad;
    }
  }
}

TEST(Io, StateIndexIsBigEndian) {
  const auto H = build_qu8it_hamiltonian({});
  EXPECT_EQ(basis_index(H.shape, {2, 5}), 8u * 1 + 4);
  const auto gs = resolve_state(parse_state_spec("gs:B=0", H.registry.params), H);
  EXPECT_NEAR(gs.norm(), 1.0, 1e-12);
}

TEST(Io, FloatsRoundTripExactly) {
  for (double x : {0.1, 1.0 / 3, -2.5e-17, 6.02214076e23}) EXPECT_EQ(std::stod(fmt17(x)), x);
  EXPECT_EQ(fmt17(std::nan("")), "nan");
}

TEST(Io, TripletsSortedByRow) {
  const auto H = build_qu8it_hamiltonian({});
  std::istringstream in(triplet_text(H.matrix));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("# rows 64 cols 64", 0), 0u);
  long prev = -1, row, col;
  double re, im;
  std::size_t n = 0;
  while (in >> row >> col >> re >> im) {
    EXPECT_GE(row, prev);
    prev = row;
    ++n;
  }
  EXPECT_EQ(n, static_cast<std::size_t>(H.matrix.nonZeros()));
}
