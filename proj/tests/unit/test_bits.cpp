#include "doctest.h"

#include "echomark/bits.hpp"
#include "echomark/error.hpp"
#include "echomark/random.hpp"

using namespace echomark;

TEST_CASE("hex is MSB first with a zero-padded last nibble")
{
    CHECK(bits_to_hex(Bits{1, 0, 1, 0, 1, 1, 1, 1}) == "af");
    CHECK(bits_to_hex(Bits{1, 1}) == "c");
    CHECK(bits_to_hex(Bits{}).empty());
    CHECK(bits_from_hex("af", 8) == Bits{1, 0, 1, 0, 1, 1, 1, 1});
    CHECK(bits_from_hex("C", 2) == Bits{1, 1});
    CHECK_THROWS_AS(bits_from_hex("a", 5), Error);
    CHECK_THROWS_AS(bits_from_hex("zz", 8), Error);
}

TEST_CASE("hex round trip")
{
    Rng rng(4);
    for (std::size_t n : {1u, 3u, 4u, 43u, 1024u}) {
        Bits b(n);
        for (auto& v : b)
            v = rng.bit();
        CHECK(bits_from_hex(bits_to_hex(b), n) == b);
    }
}

TEST_CASE("bipolar mapping")
{
    CHECK(bipolar(Bits{1, 0, 0}) == std::vector<double>{1.0, -1.0, -1.0});
    CHECK(is_binary(Bits{0, 1, 1}));
    CHECK_FALSE(is_binary(Bits{0, 2}));
}
