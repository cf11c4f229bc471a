#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/report.hpp"

using namespace tmlab;

namespace {

Provenance prov() { return {"eval", R"({"command":"eval","n":16})", "logit n=16 eps=1e-08", {{"tol", 1e-12}}}; }

}  // namespace

TEST_CASE("numbers use 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv scalars carry the provenance header") {
  std::ostringstream os;
  write_scalars(os, Format::csv, prov(), {{"Q", 0.1}}, {{"form", "none"}});
  const std::string s = os.str();
  CHECK(s.find("# tool: tm-lab ") == 0);
  CHECK(s.find("# config: {\"command\":\"eval\",\"n\":16}") != std::string::npos);
  CHECK(s.find("# grid: logit n=16") != std::string::npos);
  CHECK(s.find("# tolerance tol: 9.9999999999999998e-13") != std::string::npos);
  CHECK(s.find("quantity,value\nform,none\nQ,0.10000000000000001\n") != std::string::npos);
}

TEST_CASE("json output parses and spells out non-finite values") {
  std::ostringstream os;
  write_scalars(os, Format::json, prov(), {{"J", std::numeric_limits<double>::infinity()}, {"Q", 0.1}});
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j["metadata"]["tool"] == "tm-lab");
  CHECK(j["metadata"]["config"]["n"] == 16);
  CHECK(j["result"]["J"] == "inf");
  CHECK(j["result"]["Q"].get<double>() == 0.1);
  CHECK(os.str().find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("format names") {
  CHECK(parse_format("csv") == Format::csv);
  CHECK(parse_format("json") == Format::json);
  CHECK_THROWS_AS(parse_format("xml"), InvalidInput);
}

TEST_CASE("profile csv can be read back") {
  const GridPtr g = RadialGrid::uniform(5);
  const auto u = RadialFunction::sample(g, [](double r) { return 1.0 - r; }, true);
  std::stringstream ss;
  write_profile(ss, Format::csv, prov(), u);
  const RadialFunction v = read_csv(ss);
  CHECK(v.values() == u.values());
}
