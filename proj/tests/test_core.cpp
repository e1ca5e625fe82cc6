#include <gtest/gtest.h>

#include <algorithm>

#include "gridsync/clock.hpp"
#include "gridsync/rng.hpp"
#include "gridsync/trace.hpp"

using namespace gridsync;

TEST(SimClock, AdvanceKeepsElapsedConsistent) {
    SimClock c{0, 100};
    c = advance(c);
    EXPECT_EQ(c.tick, 1);
    EXPECT_EQ(c.elapsed_ms(), 100);

    SimClock c2{9, 100};
    c2 = advance(c2);
    EXPECT_EQ(c2.tick, 10);
    EXPECT_EQ(c2.elapsed_ms(), 1000);

    SimClock c3{0, 50};
    c3 = advance(c3);
    EXPECT_EQ(c3.elapsed_ms(), 50);
}

TEST(SimClock, ExactForLongRuns) {
    SimClock c{0, 100};
    for (int i = 0; i < 100000; ++i) c = advance(c);
    EXPECT_EQ(c.elapsed_ms(), c.tick * c.dt_ms);
}

TEST(Rng, ZeroAmplitudeIsZero) {
    Rng rng(123);
    EXPECT_EQ(noise_sample(rng, 0.0), 0.0);
}

TEST(Rng, NegativeAmplitudeRejected) {
    Rng rng(123);
    EXPECT_THROW(noise_sample(rng, -0.1), std::invalid_argument);
}

TEST(Rng, SameSeedSameSequence) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(noise_sample(a, 0.5), noise_sample(b, 0.5));
    }
}

TEST(Rng, DifferentSeedsDivergeWithin16Samples) {
    Rng a(42), b(43);
    bool differed = false;
    for (int i = 0; i < 16 && !differed; ++i) {
        differed = noise_sample(a, 0.5) != noise_sample(b, 0.5);
    }
    EXPECT_TRUE(differed);
}

TEST(Rng, SamplesWithinAmplitude) {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        double v = noise_sample(rng, 0.5);
        EXPECT_GE(v, -0.5);
        EXPECT_LE(v, 0.5);
    }
}

TEST(Trace, EmptyExportIsHeaderOnly) {
    std::string csv = export_trace({});
    EXPECT_EQ(csv, trace_csv_header() + "\n");
}

TEST(Trace, OneRecordIsTwoLines) {
    TraceRecord r;
    r.time_ms = 100;
    std::string csv = export_trace({r});
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}
