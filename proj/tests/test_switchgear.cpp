#include <gtest/gtest.h>

#include "gridsync/rng.hpp"
#include "gridsync/switchgear.hpp"

using namespace gridsync;

TEST(PinBank, PointUpdate) {
    PinBank bank;
    bank = set_pin(bank, 5, LogicLevel::High);
    EXPECT_EQ(bank.pins[5], LogicLevel::High);
    for (std::size_t i = 0; i < PinBank::kPinCount; ++i) {
        if (i != 5) EXPECT_EQ(bank.pins[i], LogicLevel::Floating);
    }
}

TEST(PinBank, LastWriteWins) {
    PinBank bank;
    bank = set_pin(bank, 5, LogicLevel::High);
    bank = set_pin(bank, 5, LogicLevel::Low);
    EXPECT_EQ(bank.pins[5], LogicLevel::Low);
}

TEST(PinBank, OutOfRangeRejected) {
    PinBank bank;
    EXPECT_THROW(set_pin(bank, 99, LogicLevel::High), std::out_of_range);
    EXPECT_THROW(set_pin(bank, 14, LogicLevel::High), std::out_of_range);
}

TEST(Relay, ActiveLowTruthTable) {
    EXPECT_EQ(relay_eval({1, LogicLevel::Low}), RelayContact::NO_closed);
    EXPECT_EQ(relay_eval({1, LogicLevel::High}), RelayContact::NC_closed);
    EXPECT_EQ(relay_eval({1, LogicLevel::Floating}), RelayContact::NC_closed);
}

TEST(Breaker, ClosesWithRequestAndPermissive) {
    Breaker b{BreakerId::DG, BreakerState::Open};
    auto r = breaker_step(b, true, true, false);
    EXPECT_FALSE(r.refused);
    EXPECT_EQ(r.breaker.state, BreakerState::Closed);
}

TEST(Breaker, RefusesWithoutPermissive) {
    Breaker b{BreakerId::DG, BreakerState::Open};
    auto r = breaker_step(b, true, false, false);
    EXPECT_TRUE(r.refused);
    EXPECT_EQ(r.refusal_kind, SafetyEventKind::CloseWithoutPermissive);
    EXPECT_EQ(r.breaker.state, BreakerState::Open);
}

TEST(Breaker, InterlockRefusesSecondClose) {
    Breaker b{BreakerId::DG, BreakerState::Open};
    auto r = breaker_step(b, true, true, /*peer_closed=*/true, /*transfer_window=*/false);
    EXPECT_TRUE(r.refused);
    EXPECT_EQ(r.refusal_kind, SafetyEventKind::InterlockViolation);
    EXPECT_EQ(r.breaker.state, BreakerState::Open);
}

TEST(Breaker, TransferWindowAllowsParallel) {
    Breaker b{BreakerId::DG, BreakerState::Open};
    auto r = breaker_step(b, true, true, true, /*transfer_window=*/true);
    EXPECT_FALSE(r.refused);
    EXPECT_EQ(r.breaker.state, BreakerState::Closed);
}

TEST(Breaker, OpenRequestAlwaysWins) {
    Breaker b{BreakerId::Grid, BreakerState::Closed};
    auto r = breaker_step(b, true, true, false, false, /*open_request=*/true);
    EXPECT_EQ(r.breaker.state, BreakerState::Open);
}

// Random command soup: the closed state is reachable only through
// request AND permissive AND (no peer or transfer window).
TEST(Breaker, FuzzNoUnsafeClose) {
    Rng rng(55);
    Breaker b{BreakerId::DG, BreakerState::Open};
    for (int i = 0; i < 100000; ++i) {
        bool request = rng.next_unit() < 0.5;
        bool permissive = rng.next_unit() < 0.5;
        bool peer = rng.next_unit() < 0.5;
        bool window = rng.next_unit() < 0.2;
        bool open_req = rng.next_unit() < 0.3;
        bool was_closed = b.closed();
        auto r = breaker_step(b, request, permissive, peer, window, open_req);
        if (!was_closed && r.breaker.closed()) {
            ASSERT_TRUE(request && permissive && (!peer || window) && !open_req);
        }
        b = r.breaker;
    }
}

TEST(SwitchgearBank, DefaultStateAllRelaysAtRest) {
    SwitchgearBank bank;
    for (int ch = 1; ch <= 8; ++ch) {
        EXPECT_FALSE(bank.energized(ch));
    }
}

TEST(SwitchgearBank, DriveEnergizesMappedChannel) {
    SwitchgearBank bank;
    bank.drive(relay_channel::kPowerSwitchOn, true);
    EXPECT_TRUE(bank.energized(relay_channel::kPowerSwitchOn));
    EXPECT_FALSE(bank.energized(relay_channel::kExcitationOn));
    bank.drive(relay_channel::kPowerSwitchOn, false);
    EXPECT_FALSE(bank.energized(relay_channel::kPowerSwitchOn));
}
