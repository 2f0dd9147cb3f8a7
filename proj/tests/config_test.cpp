#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "rlab/config.hpp"

using namespace rlab;
using namespace rlab_test;

TEST(Config, ParsesFullDescription) {
    std::istringstream in(
        "# Q_3(zeta_3)\n"
        "p = 3\n"
        "n = 1\n"
        "eisenstein = [3, 3, 1]\n"
        "precision = 40\n");
    FieldDesc d = parse_field_desc(in);
    EXPECT_EQ(d.p, 3);
    EXPECT_EQ(d.n, 1);
    EXPECT_EQ(d.work_prec, 40);
    ASSERT_EQ(d.eisenstein.size(), 3u);
    EXPECT_EQ(d.eisenstein[0], 3);
    EXPECT_EQ(d.eisenstein[2], 1);
    // default K_0 = Q_p
    ASSERT_EQ(d.unram_poly.size(), 2u);
    EXPECT_EQ(d.unram_poly[1], 1);
    // the description builds the fixture tower
    TowerPtr t = make_field(d);
    EXPECT_EQ(t->e(), 2);
    EXPECT_EQ(t->f(), 1);
}

TEST(Config, UnramifiedPart) {
    std::istringstream in(
        "p = 3\n"
        "n = 1\n"
        "unram_poly = [1, 2, 1, 1]\n"
        "eisenstein = [3, 3, 1]\n"
        "precision = 30\n");
    FieldDesc d = parse_field_desc(in);
    EXPECT_EQ(d.unram_poly.size(), 4u);
}

TEST(Config, ErrorPaths) {
    {
        std::istringstream in("p = 3\n");
        EXPECT_THROW(parse_field_desc(in), parse_error);  // missing eisenstein
    }
    {
        std::istringstream in("eisenstein = [3, 3, 1]\n");
        EXPECT_THROW(parse_field_desc(in), parse_error);  // missing p
    }
    {
        std::istringstream in("p = 3\nbogus = 1\neisenstein = [3, 3, 1]\n");
        EXPECT_THROW(parse_field_desc(in), parse_error);
    }
    {
        std::istringstream in("p = 3\neisenstein = 3, 3, 1\n");
        EXPECT_THROW(parse_field_desc(in), parse_error);  // missing brackets
    }
    {
        std::istringstream in("p = 3\neisenstein = []\n");
        EXPECT_THROW(parse_field_desc(in), parse_error);
    }
    {
        std::istringstream in("p 3\n");
        EXPECT_THROW(parse_field_desc(in), parse_error);  // no '='
    }
    EXPECT_THROW(load_field_desc("/nonexistent/path.field"), error);
}

TEST(Config, ShippedFieldFiles) {
    FieldDesc f = load_field_desc("fields/f0.field");
    EXPECT_EQ(f.p, 3);
    EXPECT_EQ(f.eisenstein, f0_desc().eisenstein);
    FieldDesc k = load_field_desc("fields/k6.field");
    EXPECT_EQ(k.eisenstein.size(), 7u);
    FieldDesc q = load_field_desc("fields/q5.field");
    EXPECT_EQ(q.p, 5);
    EXPECT_EQ(q.eisenstein, q5_desc().eisenstein);
}
