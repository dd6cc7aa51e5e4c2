#include <gtest/gtest.h>

#include "sopt/calibration.hpp"
#include "sopt/gallery.hpp"
#include "sopt/sampling.hpp"
#include "sopt/transformers.hpp"

using namespace sopt;

namespace {

const UniPoly kGenerous({64, 128, 64});  // 64 (x+1)^2

std::vector<Oracle> reg_tables(std::uint64_t seed, std::size_t count) {
  sampling::Rng rng(seed);
  std::vector<Oracle> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampling::random_reg_table(rng));
  return out;
}

Oracle echo_plus_one() {
  return Oracle::adaptive([](std::string_view q, const Oracle::Entries&) { return std::string(q) + "1"; });
}

}  // namespace

// --- compose --------------------------------------------------------------

TEST(Compose, MaxLengthAfterIdentityIsMaxLength) {
  const Machine ml = gallery::max_length_machine();
  const Machine c = compose_machines(ml, gallery::identity_machine());
  sampling::Rng rng(71);
  const auto oracles = calibration::mixed_oracles(72, 195);
  for (const auto& o : oracles)
    for (std::size_t n = 0; n <= 4; ++n) {
      const std::string a = sampling::random_bits(rng, n);
      EXPECT_EQ(run(c, o, a).output, run(ml, o, a).output) << o.describe() << " " << a;
    }
}

TEST(Compose, ConstantInnerMachineActsAsConstantOracle) {
  const Machine ia = gallery::iterated_apply_machine();
  const Machine c = compose_machines(ia, gallery::constant_machine("0110"));
  for (std::size_t n = 0; n <= 5; ++n) {
    const std::string a(n, '1');
    EXPECT_EQ(run(c, Oracle::doubling(), a).output, run(ia, Oracle::constant("0110"), a).output);
  }
}

TEST(Compose, SemanticsAgainstMachineOracle) {
  const Machine ia = gallery::iterated_apply_machine(), ml = gallery::max_length_machine();
  const std::vector<std::pair<Machine, Machine>> pairs{{ia, ml}, {ml, ml}, {ia, gallery::identity_machine()}};
  const auto oracles = calibration::mixed_oracles(73, 30);
  for (const auto& [M, N] : pairs) {
    const Machine c = compose_machines(M, N);
    for (const auto& o : oracles)
      for (std::size_t n = 0; n <= 3; ++n) {
        const std::string a(n, '0');
        EXPECT_EQ(run(c, o, a).output, run(M, machine_oracle(N, o), a).output) << c.name << " " << o.describe();
      }
  }
}

TEST(Compose, TimeWithinFrozenBound) {
  const Machine ml = gallery::max_length_machine(), id = gallery::identity_machine();
  const auto oracles = calibration::mixed_oracles(74, 100);
  for (const auto& [M, N] : {std::pair{ml, id}, std::pair{ml, ml}, std::pair{id, ml}}) {
    const Machine c = compose_machines(M, N);
    const Description bound = gallery::compose_time(*M.bounds.running_time, *N.bounds.running_time);
    for (const auto& o : oracles) {
      const LengthFn l = length_fn_of(o);
      for (std::size_t n = 0; n <= 5; ++n)
        EXPECT_TRUE(check_running_time(run(c, o, std::string(n, '1')).trace, bound, l).pass()) << c.name;
    }
  }
}

TEST(Compose, FrozenScaleIsTheFit) { EXPECT_EQ(calibration::compose_scale(), gallery::frozen::kCompose); }

// --- clock_finite_revision --------------------------------------------------

TEST(ClockFiniteRevision, QueryFreeMachineUnchanged) {
  const Machine k = gallery::constant_machine("101");
  const Machine c = clock_finite_revision(k, 0, UniPoly({100}));
  for (const Oracle& o : {Oracle::constant(""), Oracle::doubling()})
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(run(c, o, std::string(n, '0')).output, "101");
}

TEST(ClockFiniteRevision, FlrStressForcesEpsilon) {
  const Machine c = clock_finite_revision(gallery::max_length_machine(), 2, kGenerous);
  const auto rep = gallery::flr_stress(c, 2);
  EXPECT_TRUE(rep.run.halted());
  EXPECT_EQ(rep.run.output, "");
  EXPECT_LE(rep.revisions.strict_increases, 3u);
  EXPECT_TRUE(rep.output_wrong);
}

TEST(ClockFiniteRevision, GenerousClockAgreesOnReg) {
  const Machine ml = gallery::max_length_machine();
  const Machine c = clock_finite_revision(ml, 10, kGenerous);
  sampling::Rng rng(75);
  for (const auto& o : reg_tables(76, 300)) {
    const std::string a = sampling::random_bits(rng, sampling::uniform(rng, 0, 6));
    const auto plain = run(ml, o, a);
    ASSERT_TRUE(respects_clock(plain.trace, 10, kGenerous));
    EXPECT_EQ(run(c, o, a).output, plain.output);
  }
}

TEST(ClockFiniteRevision, OutputIsMachineOutputExactlyWhenTheRunRespectsTheClock) {
  const Machine ml = gallery::max_length_machine();
  sampling::Rng rng(77);
  const auto oracles = calibration::mixed_oracles(78, 100);
  std::size_t respected = 0, violated = 0;
  for (Natural N = 0; N <= 3; ++N)
    for (const UniPoly& p : {UniPoly({20, 20}), UniPoly({10, 0, 8}), kGenerous}) {
      const Machine c = clock_finite_revision(ml, N, p);
      for (const auto& o : oracles) {
        const std::string a = sampling::random_bits(rng, sampling::uniform(rng, 0, 5));
        const auto plain = run(ml, o, a);
        const bool ok = respects_clock(plain.trace, N, p);
        (ok ? respected : violated)++;
        EXPECT_EQ(run(c, o, a).output, ok ? plain.output : std::string()) << c.name << " " << o.describe();
      }
    }
  EXPECT_GT(respected, 0u);
  EXPECT_GT(violated, 0u);
}

TEST(ClockFiniteRevision, GuaranteesHoldOnEveryOracle) {
  const Machine ml = gallery::max_length_machine();
  const auto oracles = calibration::mixed_oracles(79, 60);
  for (Natural N = 0; N <= 3; ++N)
    for (const UniPoly& p : {UniPoly({1, 1}), UniPoly({10, 0, 8}), kGenerous}) {
      const Machine c = clock_finite_revision(ml, N, p);
      ASSERT_EQ(c.bounds.revisions, N + 1);
      auto check = [&](const Trace& tr) {
        EXPECT_TRUE(tr.halted);
        EXPECT_LE(count_revisions(tr).strict_increases, N + 1);
        EXPECT_TRUE(check_step_count(tr, *c.bounds.step_count).pass()) << c.name;
      };
      for (const auto& o : oracles)
        for (std::size_t n = 0; n <= 4; ++n) check(run(c, o, std::string(n, '0')).trace);
      for (Natural k = 0; k <= 5; ++k) check(gallery::flr_stress(c, k).run.trace);
      Oracle echo = echo_plus_one();
      check(run(c, echo, "0101").trace);
    }
}

TEST(ClockFiniteRevision, TimeWithinRevisionIterate) {
  // A machine with step-count t and at most R revisions runs in (t o (l+id))^R (t(n)).
  const Machine ml = gallery::max_length_machine();
  const auto oracles = calibration::mixed_oracles(80, 40);
  for (Natural N = 0; N <= 2; ++N) {
    const Machine c = clock_finite_revision(ml, N, UniPoly({10, 0, 8}));
    for (const auto& o : oracles) {
      const LengthFn l = length_fn_of(o);
      for (std::size_t n = 0; n <= 4; ++n) {
        const Trace tr = run(c, o, std::string(n, '1')).trace;
        EXPECT_LE(tr.time, revision_iterate_saturating(*c.bounds.step_count, *c.bounds.revisions, l, n));
      }
    }
  }
}

// --- clock_with_majorant ----------------------------------------------------

TEST(ClockWithMajorant, QueryFreeConstantMachineUnchanged) {
  const Machine k = gallery::constant_machine("0011");
  const Machine c = clock_with_majorant(k, *k.bounds.running_time);
  for (const Oracle& o : {Oracle::constant(""), Oracle::doubling(), Oracle::constant("111")})
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(run(c, o, std::string(n, '1')).output, "0011");
}

TEST(ClockWithMajorant, MaxLengthAgreesOnReg) {
  const Machine ml = gallery::max_length_machine();
  const Machine c = clock_with_majorant(ml, *ml.bounds.running_time);
  sampling::Rng rng(81);
  for (const auto& o : reg_tables(82, 200)) {
    const std::string a = sampling::random_bits(rng, sampling::uniform(rng, 0, 6));
    const auto plain = run(ml, o, a);
    ASSERT_TRUE(check_running_time(plain.trace, *ml.bounds.running_time, length_fn_of(o)).pass());
    EXPECT_EQ(run(c, o, a).output, plain.output);
  }
}

TEST(ClockWithMajorant, GuaranteesHoldOnAdversaries) {
  const Machine ml = gallery::max_length_machine();
  const Machine c = clock_with_majorant(ml, *ml.bounds.running_time);
  const Majorant mj = majorant(*ml.bounds.running_time);
  ASSERT_EQ(c.bounds.revisions, mj.height + 2);
  auto check = [&](const Trace& tr) {
    EXPECT_TRUE(tr.halted);
    EXPECT_LE(count_revisions(tr).strict_increases, *c.bounds.revisions);
    EXPECT_TRUE(check_step_count(tr, *c.bounds.step_count).pass());
  };
  for (Natural k = 0; k <= 6; ++k) check(gallery::flr_stress(c, k).run.trace);
  // Growing patterns make the probes long: the budget p(|phi(0^{p(n)})|) is
  // polynomial but large, so those run at small n with ample fuel.
  for (const auto& o : calibration::mixed_oracles(83, 60))
    for (std::size_t n = 0; n <= (o.kind() == Oracle::Kind::Table ? 4u : 1u); ++n)
      check(run(c, o, std::string(n, '0'), 1'000'000'000).trace);
  Oracle echo = echo_plus_one();
  check(run(c, echo, "", 1'000'000'000).trace);
}

TEST(ClockScale, FrozenScaleIsTheFit) { EXPECT_EQ(calibration::clock_scale(), kClockStepScale); }

// --- respects_clock ---------------------------------------------------------

TEST(RespectsClock, BudgetIsCheckedAgainstThePrecedingProfileValue) {
  Trace t;
  t.input_length = 1;
  t.time = 4;
  t.queries = {{2, 0, 3}};
  // o = 1,1,3,3,3: steps 1..2 get p(1), steps 3..4 get p(3).
  EXPECT_TRUE(respects_clock(t, 1, UniPoly({0, 2})));
  EXPECT_FALSE(respects_clock(t, 0, UniPoly({0, 2})));
  EXPECT_FALSE(respects_clock(t, 1, UniPoly({1})));
  EXPECT_FALSE(respects_clock(t, 1, UniPoly({0, 0, 1})));
  EXPECT_TRUE(respects_clock(t, 1, UniPoly({2, 0, 1})));
  t.queries.clear();
  EXPECT_FALSE(respects_clock(t, 0, UniPoly({2, 0, 1})));
}

// --- retract_to_reg ---------------------------------------------------------

TEST(Retract, WorkedExample) {
  const Oracle o = Oracle::table({{"", "01"}, {"0", "1"}, {"1", "111"}});
  const Oracle r = retract_to_reg(o);
  EXPECT_EQ(r.answer("1"), "11");
  EXPECT_EQ(r.answer("0"), "10");
  EXPECT_EQ(r.answer(""), "01");
  // The printed variant is not length-monotone on this oracle.
  EXPECT_FALSE(is_length_monotone(retract_to_reg(o, true), 3).pass);
}

TEST(Retract, IdentityOnDoubling) {
  const Oracle d = Oracle::doubling();
  const Oracle r = retract_to_reg(d);
  for_each_string(8, [&](const std::string& a) { ASSERT_EQ(r.answer(a), d.answer(a)); });
}

TEST(Retract, ImageIsMonotoneIdempotentAndFixesReg) {
  sampling::Rng rng(84);
  for (int i = 0; i < 150; ++i) {
    const Oracle reg = sampling::random_reg_table(rng);
    const Oracle any = sampling::random_table(rng);
    const Oracle r = retract_to_reg(any), rr = retract_to_reg(r), rreg = retract_to_reg(reg);
    EXPECT_TRUE(is_length_monotone(r, 6).pass);
    for_each_string(6, [&](const std::string& a) {
      ASSERT_EQ(rr.answer(a), r.answer(a));
      ASSERT_EQ(rreg.answer(a), reg.answer(a));
    });
  }
}

TEST(Retract, RejectsAdaptiveOracles) { EXPECT_THROW(retract_to_reg(echo_plus_one()), std::invalid_argument); }
