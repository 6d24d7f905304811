#include <doctest.h>

TEST_SUITE("dynamics") {}
