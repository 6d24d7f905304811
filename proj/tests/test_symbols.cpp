#include <doctest.h>

TEST_SUITE("symbols") {}
