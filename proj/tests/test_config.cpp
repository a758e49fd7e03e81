#include <doctest.h>

#include <fstream>

#include "fracspec/config.hpp"
#include "fracspec/errors.hpp"

using namespace fracspec;

namespace {

const char* kBase = R"([grid]
dimension = 1
half_length = 20
points = 256
order = 0.25

[operator]
beta = 1
potential = gaussian_well
depth = 1
width = 1
)";

std::string with_line(const std::string& section, const std::string& line) {
  std::string text = kBase;
  const auto at = text.find("[" + section + "]");
  if (at == std::string::npos) return text + "\n[" + section + "]\n" + line + "\n";
  const auto eol = text.find('\n', at);
  return text.insert(eol + 1, line + "\n");
}

template <class F>
std::vector<std::string> validation_problems(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.problems;
  }
  return {};
}

bool mentions(const std::vector<std::string>& items, const std::string& needle) {
  for (const auto& s : items) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config("[grid]\norder = 0.25\n");
  CHECK(c.grid.dimension == 1);
  CHECK(c.grid.half_length == 20.0);
  CHECK(c.grid.points == 256);
  CHECK(c.op.beta == 1.0);
  CHECK(std::holds_alternative<GaussianWell>(c.op.potential));
  CHECK(c.solve.tol == 1e-9);
  CHECK(c.solve.seed == 42);
  CHECK(c.solve.max_iter == 5000);
  CHECK(c.verify.checks == all_check_names());
  CHECK(c.verify.path_samples == 101);
  CHECK(c.verify.dilation_points == 65536);
  CHECK_FALSE(c.sweep.present());
  CHECK(c.output.formats == std::vector<std::string>{"json", "csv"});
  CHECK_NOTHROW(parse_config(""));
}

TEST_CASE("full config") {
  const RunConfig c = parse_config(with_line("verify", "t_list = 1, 0.5, 0.25\nchecks = positivity, nodal"));
  CHECK(c.verify.t_list == std::vector<double>{1.0, 0.5, 0.25});
  CHECK(c.verify.checks == std::vector<std::string>{"positivity", "nodal"});

  const RunConfig b = parse_config("[operator]\npotential = compact_bump\nradius = 2\ndepth = 0.5\n");
  CHECK(std::get<CompactBump>(b.op.potential) == CompactBump{2.0, 0.5});
  const RunConfig k = parse_config("[operator]\npotential = constant_one\n");
  CHECK(std::holds_alternative<ConstantOne>(k.op.potential));
  const RunConfig two = parse_config("[grid]\ndimension = 2\norder = 0.9\npoints = 32\nhalf_length = 8\n");
  CHECK(two.verify.dilation_points == 512);
}

TEST_CASE("validation errors") {
  SUBCASE("order violating N > 2s") {
    const auto problems = validation_problems([] { parse_config("[grid]\norder = 0.6\n"); });
    CHECK(mentions(problems, "N > 2s violated"));
  }
  SUBCASE("every problem is listed") {
    const auto problems = validation_problems([] {
      parse_config("[grid]\norder = 0.6\npoints = 255\n[operator]\nbeta = -1\n[solve]\nk = 0\n");
    });
    CHECK(problems.size() >= 4);
    CHECK(mentions(problems, "grid.points"));
    CHECK(mentions(problems, "beta"));
    CHECK(mentions(problems, "k"));
  }
  SUBCASE("potential constraints") {
    CHECK(mentions(validation_problems([] { parse_config("[operator]\nwidth = 9\n"); }), "decay"));
    CHECK(mentions(validation_problems([] {
      parse_config("[operator]\npotential = compact_bump\nradius = 15\n");
    }), "radius"));
    CHECK(mentions(validation_problems([] { parse_config("[operator]\npotential = harmonic\n"); }),
                   "harmonic"));
    CHECK(mentions(validation_problems([] {
      parse_config("[operator]\npotential = constant_one\nwidth = 2\n");
    }), "does not apply"));
  }
  SUBCASE("unknown check and bad sweep") {
    CHECK(mentions(validation_problems([] { parse_config("[verify]\nchecks = positivity, magic\n"); }),
                   "magic"));
    CHECK(!validation_problems([] { parse_config("[sweep]\nparameter = gamma\nvalues = 1\n"); }).empty());
    CHECK(!validation_problems([] { parse_config("[sweep]\nparameter = beta\n"); }).empty());
    CHECK(!validation_problems([] { parse_config("[verify]\nt_list = 1, 2\n"); }).empty());
  }
  SUBCASE("validate_config re-checks structs") {
    RunConfig c;
    c.grid.order = 0.7;
    CHECK_THROWS_AS(validate_config(c), ValidationError);
    c.grid.order = 0.25;
    CHECK_NOTHROW(validate_config(c));
  }
}

TEST_CASE("parse errors") {
  SUBCASE("misspelled key") {
    const std::string text = with_line("operator", "betaa = 2");
    try {
      parse_config(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("betaa") != std::string::npos);
      CHECK(e.line == 8);
    }
  }
  SUBCASE("unknown section") { CHECK_THROWS_AS(parse_config("[gird]\npoints = 4\n"), ParseError); }
  SUBCASE("key outside a section") { CHECK_THROWS_AS(parse_config("beta = 1\n"), ParseError); }
  SUBCASE("non-numeric value") {
    CHECK_THROWS_AS(parse_config("[grid]\npoints = many\n"), ParseError);
  }
  SUBCASE("malformed line") { CHECK_THROWS_AS(parse_config("[grid\n"), ParseError); }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), IoError); }
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"gaussian_well", "nodal", "constant_one", "beta_sweep", "compact_bump_2d"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(std::string(FRACSPEC_SOURCE_DIR) + "/configs/" + name + ".ini"));
  }
}

TEST_CASE("fingerprint") {
  const RunConfig base = parse_config(kBase);
  const std::string fp = fingerprint_hex(base);
  CHECK(fp.size() == 16);
  CHECK(fingerprint_hex(parse_config(kBase)) == fp);
  CHECK(fingerprint_hex(parse_config(std::string("; comment\n") + kBase)) == fp);

  const std::vector<std::string> edits = {
      "[grid]\norder = 0.3",          "[grid]\nhalf_length = 21",   "[grid]\npoints = 258",
      "[operator]\nbeta = 1.5",       "[operator]\ndepth = 0.9",    "[operator]\nwidth = 1.1",
      "[operator]\ntail_tol = 1e-7",  "[solve]\nk = 4",             "[solve]\ntol = 1e-10",
      "[solve]\nseed = 43",           "[solve]\nmax_iter = 100",    "[solve]\nblock_size = 8",
      "[verify]\npath_samples = 51",  "[verify]\nchecks = nodal",   "[verify]\nslope_tol = 0.1",
      "[verify]\nt_list = 1, 0.5",    "[verify]\nprobe_width = 3",  "[sweep]\nparameter = beta\nvalues = 1, 2",
  };
  for (const auto& edit : edits) {
    CAPTURE(edit);
    const auto nl = edit.find('\n');
    const std::string section = edit.substr(1, edit.find(']') - 1);
    std::string text = kBase;
    const auto at = text.find("[" + section + "]");
    std::string key = edit.substr(nl + 1, edit.find(' ', nl) - nl - 1);
    if (at != std::string::npos) {
      // replace an existing assignment of the same key
      const auto kpos = text.find("\n" + key + " ", at);
      if (kpos != std::string::npos) {
        const auto eol = text.find('\n', kpos + 1);
        text.erase(kpos + 1, eol - kpos);
      }
      text.insert(text.find('\n', at) + 1, edit.substr(nl + 1) + "\n");
    } else {
      text += "\n" + edit + "\n";
    }
    CHECK(fingerprint_hex(parse_config(text)) != fp);
  }
  // the output block never changes computed numbers
  CHECK(fingerprint_hex(parse_config(std::string(kBase) + "[output]\ndirectory = elsewhere\n")) == fp);
}

TEST_CASE("canonical json") {
  const auto j = canonical_json(parse_config(kBase));
  CHECK(j["grid"]["points"] == 256);
  CHECK(j["operator"]["potential"]["kind"] == "gaussian_well");
  CHECK_FALSE(j.contains("output"));
}
