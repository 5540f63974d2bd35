#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>

#include "efimov4d/parallel.hpp"

using namespace efimov4d;

TEST(Parallel, KeepsInputOrder) {
    std::vector<int> in(100);
    for (int i = 0; i < 100; ++i) in[i] = i;
    setenv("EFIMOV4D_THREADS", "4", 1);
    const auto out = parallel::map(in, [](int v) { return v * v; });
    unsetenv("EFIMOV4D_THREADS");
    for (int i = 0; i < 100; ++i) EXPECT_EQ(out[i], i * i);
}

TEST(Parallel, PropagatesExceptions) {
    const std::vector<int> in = {1, 2, 3};
    EXPECT_THROW(parallel::map(in, [](int v) -> int {
                     if (v == 2) throw std::runtime_error("boom");
                     return v;
                 }),
                 std::runtime_error);
}

TEST(Parallel, EnvironmentCapsWorkers) {
    setenv("EFIMOV4D_THREADS", "1", 1);
    EXPECT_EQ(parallel::worker_count(), 1u);
    setenv("EFIMOV4D_THREADS", "garbage", 1);
    EXPECT_GE(parallel::worker_count(), 1u);
    unsetenv("EFIMOV4D_THREADS");
    EXPECT_GE(parallel::worker_count(), 1u);
}
