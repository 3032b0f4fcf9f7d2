#include <gtest/gtest.h>

#include "blochfact/io.hpp"

using namespace blochfact;
using blochfact::io::json;

namespace {

bool same_bits(const BlochFunc& a, const BlochFunc& b) {
  if (a.dim != b.dim || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].basis.index() != b.terms[i].basis.index()) return false;
    if (a.terms[i].payload != b.terms[i].payload) return false;
    if (const auto* m = std::get_if<Monomial>(&a.terms[i].basis); m && m->k != std::get<Monomial>(b.terms[i].basis).k)
      return false;
    if (const auto* k = std::get_if<Kernel>(&a.terms[i].basis); k && !(k->zeta == std::get<Kernel>(b.terms[i].basis).zeta))
      return false;
  }
  return true;
}

}  // namespace

TEST(Json, BlochFuncRoundTripIsBitExact) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    BlochFunc f = random_ball_function_cheap(7, 3, s);
    f.add(CVector::Constant(3, cplx(1.0 / 3.0, -std::exp(-40.0))), Kernel{DiscPoint(cplx(0.1 / 7, -0.999))});
    const std::string text = io::to_json(f).dump();
    const BlochFunc g = io::blochfunc_from_json(json::parse(text));
    EXPECT_TRUE(same_bits(f, g));
    EXPECT_EQ(io::to_json(g).dump(), text);
  }
}

TEST(Json, MoleculeAndVecMoleculeRoundTrip) {
  Molecule m{{cplx(1.5, -2.0), DiscPoint(0.3)}, {cplx(0.1, 0.0), DiscPoint(cplx(-0.2, 0.7))}};
  const Molecule m2 = io::molecule_from_json(json::parse(io::to_json(m).dump()));
  ASSERT_EQ(m2.seq.size(), 2u);
  EXPECT_EQ(m2.seq.pairs[0].lambda, m.seq.pairs[0].lambda);
  EXPECT_EQ(m2.seq.pairs[1].z, m.seq.pairs[1].z);

  VecMolecule g(2);
  g.add(cplx(0, 1), DiscPoint(0.25), CVector::Constant(2, cplx(0.5, 1.0 / 3.0)));
  const VecMolecule g2 = io::vec_molecule_from_json(json::parse(io::to_json(g).dump()));
  ASSERT_EQ(g2.terms.size(), 1u);
  EXPECT_EQ(g2.terms[0].x, g.terms[0].x);
  EXPECT_EQ(g2.terms[0].lambda, g.terms[0].lambda);
}

TEST(Json, MalformedInputsAreRejected) {
  EXPECT_THROW(io::blochfunc_from_json(json::parse(R"({"dim":1})")), InvalidInput);
  EXPECT_THROW(io::blochfunc_from_json(json::parse(R"({"dim":1,"terms":[],"extra":0})")), InvalidInput);
  EXPECT_THROW(io::blochfunc_from_json(
                   json::parse(R"({"dim":2,"terms":[{"payload":[[1,0]],"basis":{"type":"monomial","k":1}}]})")),
               InvalidInput);
  EXPECT_THROW(io::blochfunc_from_json(
                   json::parse(R"({"dim":1,"terms":[{"payload":[[1,0]],"basis":{"type":"kernel","zeta":[1,0]}}]})")),
               InvalidInput);
  EXPECT_THROW(io::blochfunc_from_json(
                   json::parse(R"({"dim":1,"terms":[{"payload":[[1,0]],"basis":{"type":"spline","k":1}}]})")),
               InvalidInput);
  EXPECT_THROW(io::molecule_from_json(json::parse(R"({"pairs":[{"lambda":[1],"z":[0,0]}]})")), InvalidInput);
  EXPECT_THROW(io::vec_molecule_from_json(json::parse(R"({"dim":2,"terms":[{"lambda":[1,0],"z":[0,0],"x":[[1,0]]}]})")),
               InvalidInput);
}

TEST(Json, ReportFragments) {
  const auto b = bloch_seminorm(BlochFunc::kernel(DiscPoint(0.5)), GridSpec::coarse());
  const json j = io::to_json(b);
  EXPECT_EQ(j["lower"].get<double>(), b.lower);
  EXPECT_EQ(io::check("x", 0.5, true)["pass"], true);
  EXPECT_EQ(io::hex64(io::fnv1a("")), "cbf29ce484222325");
  EXPECT_EQ(io::hex64(io::fnv1a("a")), "af63dc4c8601ec8c");
}
