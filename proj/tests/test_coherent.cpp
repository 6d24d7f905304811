#include <doctest.h>

TEST_SUITE("coherent") {}
