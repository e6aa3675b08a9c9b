#include <gtest/gtest.h>

#include <random>

#include "frlogic/halpern/structure.hpp"
#include "frlogic/halpern/structure_io.hpp"
#include "support/generators.hpp"

using namespace frlogic::halpern;
using frlogic::logic::AxiomSchema;
using frlogic::logic::FrameProperty;
using frlogic::logic::KripkeFrame;
using frlogic::logic::KripkeModel;
using frlogic::logic::ModelFileError;
using frlogic::logic::parse;
using frlogic::testing::pick;
using frlogic::testing::random_formula;
using frlogic::testing::random_generalized;
using frlogic::testing::random_structure;

namespace {

const std::vector<std::string> kAtoms{"p", "q", "r"};
const std::vector<std::string> kAgents{"x", "y"};

// Three worlds, phi true at w0 and w1.
KripkeModel three_worlds() {
  KripkeModel m{KripkeFrame({"w0", "w1", "w2"}, {"x"})};
  WorldSet phi(3);
  phi << true, true, false;
  m.set_atom("phi", phi);
  return m;
}

ProbabilityStructure with_weights(const KripkeModel& m, std::initializer_list<double> w) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double v : w) p(i++) = v;
  return ProbabilityStructure(m, {{"x", p}});
}

std::vector<Formula> probes_for(std::mt19937& rng, std::size_t count) {
  std::vector<Formula> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_formula(rng, 3, kAtoms, kAgents));
  return out;
}

}  // namespace

TEST(Certain, Examples) {
  const KripkeModel m = three_worlds();
  const Formula phi = parse("phi");
  const ProbabilityStructure uniform = with_weights(m, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_TRUE(certain(uniform, "x", parse("phi | ~phi")));
  EXPECT_TRUE(certain_prime(uniform, "x", parse("phi | ~phi")));
  EXPECT_FALSE(certain(uniform, "x", phi));

  const ProbabilityStructure on_w2 = with_weights(m, {0, 0, 1});
  EXPECT_FALSE(certain(on_w2, "x", phi));
  EXPECT_FALSE(certain_prime(on_w2, "x", phi));

  const ProbabilityStructure on_phi = with_weights(m, {0.25, 0.75, 0});
  EXPECT_TRUE(certain(on_phi, "x", phi));
  EXPECT_TRUE(certain_prime(on_phi, "x", phi));
  EXPECT_TRUE(certain(on_phi, "x", parse("[x]phi")));
  EXPECT_TRUE(valid_in_model(induced_kripke(on_phi), parse("[x]phi")));
}

TEST(Certain, UnknownAtomsAndAgentsThrow) {
  const ProbabilityStructure s = with_weights(three_worlds(), {1, 0, 0});
  EXPECT_THROW(certain(s, "x", parse("psi")), frlogic::logic::UnknownAtom);
  EXPECT_THROW(certain(s, "z", parse("phi")), frlogic::logic::UnknownAgent);
  EXPECT_THROW(certain_prime(s, "x", parse("[z]phi")), frlogic::logic::UnknownAgent);
}

TEST(Structure, RejectsBadDistributions) {
  const KripkeModel m = three_worlds();
  EXPECT_THROW(with_weights(m, {0.3, 0.3, 0.3}), InvalidStructure);
  EXPECT_THROW(with_weights(m, {1.5, -0.5, 0}), InvalidStructure);
  EXPECT_THROW(with_weights(m, {1, 0}), InvalidStructure);
  EXPECT_THROW(ProbabilityStructure(m, {}), InvalidStructure);
  KripkeModel related = m;
  related.frame().add_pair("x", 0, 1);
  EXPECT_THROW(with_weights(related, {1, 0, 0}), InvalidStructure);
  EXPECT_NO_THROW(with_weights(m, {0.5, 0.5 + 1e-12, 0}));
}

TEST(Property, CertainMatchesSupportOnFullSupport) {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    const ProbabilityStructure s = random_structure(rng, 1 + pick(rng, 6), kAgents, kAtoms, true);
    const Formula f = random_formula(rng, 3, kAtoms, kAgents);
    const bool valid = extension(s, f).all();
    for (const auto& a : kAgents) {
      EXPECT_EQ(certain(s, a, f), valid);
      EXPECT_EQ(certain_prime(s, a, f), valid);
    }
  }
}

TEST(Property, BothCertaintyRoutesAgree) {
  std::mt19937 rng(12);
  int certain_count = 0;
  for (int i = 0; i < 300; ++i) {
    const ProbabilityStructure s = random_structure(rng, 1 + pick(rng, 6), kAgents, kAtoms);
    for (const auto& f : probes_for(rng, 20))
      for (const auto& a : kAgents) {
        const bool c = certain(s, a, f);
        certain_count += c;
        ASSERT_EQ(c, certain_prime(s, a, f)) << to_string(f);
      }
    const GeneralizedProbabilityStructure g = random_generalized(rng, 1 + pick(rng, 6), kAgents, kAtoms);
    for (const auto& f : probes_for(rng, 5))
      for (std::size_t w = 0; w < g.size(); ++w) ASSERT_EQ(certain_at(g, "x", w, f), certain_prime_at(g, "x", w, f));
  }
  EXPECT_GT(certain_count, 1000);
}

TEST(FalseBeliefs, Examples) {
  const KripkeModel m = three_worlds();
  const FalseBeliefSet none = false_beliefs(with_weights(m, {0.2, 0.3, 0.5}), "x", {parse("phi"), parse("~phi")});
  EXPECT_FALSE(none.worlds.any());
  EXPECT_EQ(none.measure, 0.0);

  KripkeModel single{KripkeFrame({"w0", "w1", "w2"}, {"x"})};
  WorldSet only_w0(3);
  only_w0 << true, false, false;
  single.set_atom("phi", only_w0);
  const FalseBeliefSet f = false_beliefs(with_weights(single, {1, 0, 0}), "x", {parse("phi")});
  EXPECT_TRUE((f.worlds == !only_w0).all());
  EXPECT_EQ(f.measure, 0.0);
  EXPECT_FALSE(false_beliefs(with_weights(single, {1, 0, 0}), "x", {}).worlds.any());
}

TEST(Property, FalseBeliefsHaveMeasureZero) {
  std::mt19937 rng(13);
  int nonempty = 0;
  for (int i = 0; i < 300; ++i) {
    const ProbabilityStructure s = random_structure(rng, 1 + pick(rng, 6), kAgents, kAtoms);
    const auto probes = probes_for(rng, 20);
    for (const auto& a : kAgents) {
      const FalseBeliefSet f = false_beliefs(s, a, probes);
      nonempty += f.worlds.any();
      EXPECT_LE(f.measure, frlogic::kDefaultTolerance);
    }
  }
  EXPECT_GT(nonempty, 50);
}

TEST(InducedKripke, Examples) {
  const KripkeModel m = three_worlds();
  const GeneralizedProbabilityStructure identity(m, {{"x", Eigen::MatrixXd::Identity(3, 3)}});
  const KripkeModel id = induced_kripke(identity);
  EXPECT_TRUE((id.frame().relation("x") == Eigen::MatrixXi::Identity(3, 3).array().cast<bool>()).all());
  EXPECT_TRUE(check_frame_property(id.frame(), FrameProperty::Reflexive).holds);
  EXPECT_TRUE((id.atom("phi") == m.atom("phi")).all());

  const GeneralizedProbabilityStructure positive(m, {{"x", Eigen::MatrixXd::Constant(3, 3, 1.0 / 3)}});
  EXPECT_TRUE(induced_kripke(positive).frame().relation("x").all());
}

TEST(Property, InducedFramesAreSerial) {
  std::mt19937 rng(14);
  for (int i = 0; i < 300; ++i) {
    const KripkeModel g = induced_kripke(random_generalized(rng, 1 + pick(rng, 6), kAgents, kAtoms));
    EXPECT_TRUE(check_frame_property(g.frame(), FrameProperty::Serial).holds);
    const KripkeModel s = induced_kripke(random_structure(rng, 1 + pick(rng, 6), kAgents, kAtoms));
    for (FrameProperty p : {FrameProperty::Serial, FrameProperty::Transitive, FrameProperty::Euclidean})
      EXPECT_TRUE(check_frame_property(s.frame(), p).holds);
    const KripkeModel r = induced_kripke(random_generalized(rng, 1 + pick(rng, 6), kAgents, kAtoms, true));
    EXPECT_TRUE(check_frame_property(r.frame(), FrameProperty::Reflexive).holds);
  }
}

TEST(Soundness, KD45OnN0) {
  std::mt19937 rng(15);
  std::vector<GeneralizedProbabilityStructure> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(generalize(random_structure(rng, 1 + pick(rng, 6), kAgents, kAtoms)));
  const SoundnessReport r = soundness_probe(System::KD45, StructureClass::N0, samples, probes_for(rng, 6));
  EXPECT_TRUE(r.all_hold());
  EXPECT_EQ(r.structures_checked, 100u);
  EXPECT_EQ(r.instances_checked, 100u * 2 * (36 + 6 * 3));
}

TEST(Soundness, TFailsOnZeroWeightCounterexample) {
  KripkeModel m{KripkeFrame({"w0", "w1"}, {"x"})};
  WorldSet phi(2);
  phi << true, false;
  m.set_atom("phi", phi);
  const GeneralizedProbabilityStructure s = generalize(ProbabilityStructure(m, {{"x", Eigen::Vector2d(1, 0)}}));
  EXPECT_FALSE(in_class(s, StructureClass::N1));
  const SoundnessReport r = soundness_probe(System::S5, StructureClass::N0, {s}, {parse("phi")});
  ASSERT_FALSE(r.all_hold());
  EXPECT_EQ(r.failures.front().schema, AxiomSchema::T);
  EXPECT_EQ(r.failures.front().world, 1u);
  EXPECT_THROW(soundness_probe(System::S5, StructureClass::N1, {s}, {parse("phi")}), std::invalid_argument);
}

TEST(Soundness, S5AndTOnN1) {
  std::mt19937 rng(16);
  std::vector<GeneralizedProbabilityStructure> full, reflexive;
  for (int i = 0; i < 60; ++i) {
    full.push_back(generalize(random_structure(rng, 1 + pick(rng, 6), kAgents, kAtoms, true)));
    reflexive.push_back(random_generalized(rng, 1 + pick(rng, 6), kAgents, kAtoms, true));
  }
  const auto probes = probes_for(rng, 6);
  EXPECT_TRUE(soundness_probe(System::S5, StructureClass::N1, full, probes).all_hold());
  EXPECT_TRUE(soundness_probe(System::T, StructureClass::N1, reflexive, probes).all_hold());
}

// --- structure files ---------------------------------------------------------------

TEST(StructureIo, RoundTrip) {
  std::mt19937 rng(17);
  for (int i = 0; i < 100; ++i) {
    const ProbabilityStructure s = random_structure(rng, 1 + pick(rng, 6), kAgents, kAtoms);
    const std::string text = serialize_structure(s, 0);
    const LoadedStructure back = parse_structure(text);
    ASSERT_TRUE(std::holds_alternative<ProbabilityStructure>(back.structure));
    EXPECT_TRUE(std::get<ProbabilityStructure>(back.structure) == s);
    EXPECT_EQ(back.point, std::optional<std::size_t>(0));

    const GeneralizedProbabilityStructure g = random_generalized(rng, 1 + pick(rng, 6), kAgents, kAtoms);
    const LoadedStructure gback = parse_structure(serialize_structure(g, std::nullopt));
    ASSERT_TRUE(std::holds_alternative<GeneralizedProbabilityStructure>(gback.structure));
    EXPECT_TRUE(std::get<GeneralizedProbabilityStructure>(gback.structure) == g);
  }
}

TEST(StructureIo, Diagnostics) {
  const std::string short_sum =
      "{\n"
      "  \"worlds\": [\"w0\", \"w1\"],\n"
      "  \"agents\": [\"x\"],\n"
      "  \"weights\": {\n"
      "    \"x\": {\"w0\": 0.4, \"w1\": 0.5}\n"
      "  }\n"
      "}\n";
  try {
    parse_structure(short_sum);
    FAIL();
  } catch (const ModelFileError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.field(), "weights.x");
  }
  EXPECT_THROW(parse_structure("{\"worlds\": [\"w0\"], \"agents\": [\"x\"], \"weights\": {\"z\": {\"w0\": 1}}}"),
               ModelFileError);
  EXPECT_THROW(parse_structure("{\"worlds\": [\"w0\"], \"agents\": [\"x\"], \"weights\": {}}"), ModelFileError);
  EXPECT_THROW(parse_structure("{\"worlds\": [\"w0\"], \"agents\": [\"x\"], \"weights\": {\"x\": {\"w0\": -1}}}"),
               ModelFileError);
  EXPECT_THROW(parse_structure("{\"worlds\": [\"w0\"], \"agents\": [\"x\"], \"relations\": {}, "
                               "\"weights\": {\"x\": {\"w0\": 1}}}"),
               ModelFileError);
  EXPECT_THROW(parse_structure("{\"worlds\": [\"w0\"], \"agents\": [\"x\"], \"weights\": {\"x\": {\"w0\": {\"w0\": 0.5}}}}"),
               ModelFileError);
  EXPECT_NO_THROW(parse_structure("{\"worlds\": [\"w0\"], \"agents\": [\"x\"], \"weights\": {\"x\": {\"w0\": {\"w0\": 1}}}}"));
}
