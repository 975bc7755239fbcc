#include <gtest/gtest.h>

#include "mcp/config.hpp"
#include "mcp/errors.hpp"

using namespace mcp;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesValuesAndComments) {
  const Config c = Config::parse("# campaign\nsignal.n = 8   # length\n\nsolver.m=3\nname = a b\n",
                                 "c.cfg");
  EXPECT_EQ(c.integer("signal.n"), 8);
  EXPECT_EQ(c.integer("solver.m"), 3);
  EXPECT_EQ(c.str("name"), "a b");
  EXPECT_EQ(c.real("missing", 2.5), 2.5);
  EXPECT_FALSE(c.has("missing"));
}

TEST(Config, ErrorsCarryLocation) {
  EXPECT_EQ(message_of([] { Config::parse("a = 1\nbroken line\n", "x.cfg"); }),
            "x.cfg:2: expected 'key = value'");
  EXPECT_EQ(message_of([] { Config::parse("a = 1\nb = 2\na = 3\n", "x.cfg"); }),
            "x.cfg:3: duplicate key 'a' (first on line 1)");
  const Config c = Config::parse("n = eight\nflag = maybe\n", "y.cfg");
  EXPECT_EQ(message_of([&] { c.integer("n"); }), "y.cfg:1: key 'n' expects an integer, got 'eight'");
  EXPECT_EQ(message_of([&] { c.real("n"); }), "y.cfg:1: key 'n' expects a number, got 'eight'");
  EXPECT_EQ(message_of([&] { c.boolean("flag", false); }),
            "y.cfg:2: key 'flag' expects true or false, got 'maybe'");
  EXPECT_EQ(message_of([&] { c.str("absent"); }), "y.cfg: missing required key 'absent'");
}

TEST(Config, UnknownKeysRejected) {
  const Config c = Config::parse("a = 1\nzz = 2\n", "k.cfg");
  EXPECT_EQ(message_of([&] { c.check_keys({"a"}); }), "k.cfg:2: key 'zz' is not recognised");
}

TEST(Config, CommandLineOverridesWin) {
  Config c = Config::parse("seed = 1\n", "s.cfg");
  c.set("seed", "9");
  EXPECT_EQ(c.integer("seed"), 9);
  c.set("seed", "x");
  EXPECT_EQ(message_of([&] { c.integer("seed"); }),
            "command line: key 'seed' expects an integer, got 'x'");
}
