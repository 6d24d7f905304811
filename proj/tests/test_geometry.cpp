#include <doctest.h>

TEST_SUITE("geometry") {}
