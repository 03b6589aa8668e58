#include <gtest/gtest.h>

#include <charconv>
#include <cstring>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cavlat/cli/csv.hpp"
#include "cavlat/cli/grammar.hpp"

namespace cavlat::cli {
namespace {

TEST(Grammar, Angles) {
  EXPECT_DOUBLE_EQ(parse_angle("1.5708", "--x"), 1.5708);
  EXPECT_DOUBLE_EQ(parse_angle("0.1pi", "--x"), 0.1 * kPi);
  EXPECT_DOUBLE_EQ(parse_angle("0.5*pi", "--x"), 0.5 * kPi);
  EXPECT_DOUBLE_EQ(parse_angle("pi", "--x"), kPi);
  EXPECT_DOUBLE_EQ(parse_angle("-pi", "--x"), -kPi);
  EXPECT_DOUBLE_EQ(parse_angle("0.1\xCF\x80", "--x"), 0.1 * kPi);
  EXPECT_DOUBLE_EQ(parse_angle("+2", "--x"), 2.0);
  EXPECT_THROW(parse_angle("", "--x"), ConfigError);
  EXPECT_THROW(parse_angle("abc", "--x"), ConfigError);
  EXPECT_THROW(parse_angle("1.5rad", "--x"), ConfigError);
  EXPECT_THROW(parse_angle("xpi", "--x"), ConfigError);
}

TEST(Grammar, ErrorsNameTheField) {
  try {
    parse_number("nope", "--kappa");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "--kappa");
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
  }
}

TEST(Grammar, Axis) {
  const auto axis = parse_axis("0:pi:1001", "--axis");
  EXPECT_EQ(axis.start, 0.0);
  EXPECT_EQ(axis.stop, kPi);
  EXPECT_EQ(axis.samples, 1001);
  const auto neg = parse_axis("-2:32:3401", "--axis");
  EXPECT_EQ(neg.start, -2.0);
  EXPECT_THROW(parse_axis("0:1:1", "--axis"), ConfigError);
  EXPECT_THROW(parse_axis("0:1", "--axis"), ConfigError);
  EXPECT_THROW(parse_axis("0:1:2:3", "--axis"), ConfigError);
  EXPECT_THROW(parse_axis("0:1:2.5", "--axis"), ConfigError);
}

TEST(Grammar, States) {
  EXPECT_EQ(std::get<MottInsulator>(parse_state("mi:2", 30, "--state")).per_site, 2);
  const auto sf = std::get<Superfluid>(parse_state("sf:30", 12, "--state"));
  EXPECT_EQ(sf.atoms, 30);
  EXPECT_EQ(sf.sites, 12);
  EXPECT_EQ(std::get<Coherent>(parse_state("coherent:0.5", 30, "--state")).mean_per_site, 0.5);
  EXPECT_THROW(parse_state("coherent:0", 30, "--state"), ConfigError);
  EXPECT_THROW(parse_state("mi:0", 30, "--state"), ConfigError);
  EXPECT_THROW(parse_state("mi:1.5", 30, "--state"), ConfigError);
  EXPECT_THROW(parse_state("bec:3", 30, "--state"), ConfigError);
  EXPECT_THROW(parse_state("sf", 30, "--state"), ConfigError);
}

TEST(Grammar, Modes) {
  const auto t = parse_mode("traveling", "--probe");
  EXPECT_EQ(t.kind, ModeKind::Traveling);
  EXPECT_EQ(t.theta, 0.0);
  const auto s = parse_mode("standing:0.1pi", "--probe");
  EXPECT_EQ(s.kind, ModeKind::Standing);
  EXPECT_DOUBLE_EQ(s.theta, 0.1 * kPi);
  EXPECT_THROW(parse_mode("gaussian:0", "--probe"), ConfigError);
  const auto back = parse_mode(format_mode(s), "--probe");
  EXPECT_EQ(back.theta, s.theta);
}

TEST(Grammar, ShortestDoubleRoundTrips) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 20000; ++i) {
    double x;
    const std::uint64_t bits = rng();
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) {
      continue;
    }
    const std::string text = format_double(x);
    double y = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), y);
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0) << text;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(15.0), "15");
}

DataTable sample_table() {
  DataTable t;
  t.metadata = {{"tool", "cavlat test"}, {"state", "sf:30"}};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> a(50);
  std::vector<double> b(50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng) * 1e-9;
  }
  t.add_column("x", a);
  t.add_column("y", b);
  return t;
}

TEST(Csv, RoundTripIsExact) {
  const DataTable t = sample_table();
  std::stringstream buf;
  write_csv(buf, t);
  const DataTable back = read_csv(buf);
  EXPECT_EQ(back.metadata, t.metadata);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.data, t.data);
}

TEST(Csv, Layout) {
  DataTable t;
  t.metadata = {{"k", "v"}};
  t.add_column("a", {1.0, 0.5});
  t.add_column("b", {-2.0, 1e-20});
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(), "# k=v\na,b\n1,-2\n0.5,1e-20\n");
}

TEST(Csv, MalformedInput) {
  std::istringstream wrong_count("# a=b\nx,y\n1,2\n3\n");
  EXPECT_THROW(read_csv(wrong_count), CsvError);
  std::istringstream not_number("x,y\n1,abc\n");
  EXPECT_THROW(read_csv(not_number), CsvError);
  std::istringstream empty("# only=metadata\n");
  EXPECT_THROW(read_csv(empty), CsvError);
  std::istringstream crlf("x\r\n1\r\n");
  EXPECT_EQ(read_csv(crlf).data[0][0], 1.0);
}

TEST(Csv, MissingColumnIsNamed) {
  const DataTable t = sample_table();
  try {
    t.column_index("noise_R");
    FAIL();
  } catch (const CsvError& e) {
    EXPECT_NE(std::string(e.what()).find("noise_R"), std::string::npos);
  }
}

TEST(Json, CarriesMetadataAndRows) {
  const DataTable t = sample_table();
  std::ostringstream out;
  write_json(out, t);
  const auto doc = nlohmann::json::parse(out.str());
  EXPECT_EQ(doc["metadata"]["state"], "sf:30");
  EXPECT_EQ(doc["columns"][1], "y");
  ASSERT_EQ(doc["rows"].size(), 50u);
  EXPECT_EQ(doc["rows"][7][0].get<double>(), t.data[0][7]);
  EXPECT_EQ(doc["rows"][7][1].get<double>(), t.data[1][7]);
}

}  // namespace
}  // namespace cavlat::cli
