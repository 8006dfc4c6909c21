#include <doctest.h>

#include "casper/text.h"

using namespace casper;

TEST_CASE("tokenize lowercases and splits on punctuation") {
    CHECK(tokenize("Hello, World!") == Tokens{"hello", "world"});
    CHECK(tokenize("  ") == Tokens{});
    CHECK(tokenize("") == Tokens{});
    CHECK(tokenize("a.b,c") == Tokens{"a", "b", "c"});
}

TEST_CASE("inner hyphens and apostrophes stay in the token") {
    CHECK(tokenize("Laid-Back Camp") == Tokens{"laid-back", "camp"});
    CHECK(tokenize("I'll go") == Tokens{"i'll", "go"});
    CHECK(tokenize("I’ll go") == Tokens{"i'll", "go"});
    CHECK(tokenize("-edge- 'quoted'") == Tokens{"edge", "quoted"});
    CHECK(tokenize("a--b") == Tokens{"a", "b"});
}

TEST_CASE("unicode punctuation separates and non-ascii letters lowercase") {
    CHECK(tokenize("cafÉ—bar") == Tokens{"café", "bar"});
    CHECK(tokenize("ΑΒΓ") == Tokens{"αβγ"});
    CHECK(tokenize("Привет") == Tokens{"привет"});
    CHECK(tokenize("こんにちは。元気") ==
          Tokens{"こんにちは", "元気"});
    CHECK(tokenize("ＡＢ！") == Tokens{"ａｂ"});
}

TEST_CASE("invalid utf-8 never crashes and acts as a separator") {
    const std::string bad = std::string("ab") + '\xC3' + "cd" + '\xFF' + "e" + '\xE3';
    CHECK(tokenize(bad) == Tokens{"ab", "cd", "e"});
}

TEST_CASE("normalize_phrase is idempotent") {
    for (const char* s : {"Laid-Back  Camp!", "BUMP OF CHICKEN", "  x  "}) {
        const auto once = normalize_phrase(s);
        CHECK(normalize_phrase(once) == once);
    }
    CHECK(normalize_phrase("BUMP OF CHICKEN") == "bump of chicken");
}

TEST_CASE("trim and join") {
    CHECK(trim("  a b \n") == "a b");
    CHECK(trim("\t") == "");
    CHECK(join({"a", "b", "c"}, "-") == "a-b-c");
    CHECK(join({}, ",") == "");
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
