#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "outfn/cli.hpp"
#include "outfn/cvmetric.hpp"

using namespace outfn;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "outfn");
  args.insert(args.begin() + 1, {"--no-cache", "--threads", "1"});
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("automorphism text") {
  CHECK(cli::parse_automorphism("a->ab, b->a").str() == "a->ab, b->a");
  CHECK(cli::parse_automorphism("a->aba, b->ba, c->ca").rank() == 3);
  CHECK_THROWS(cli::parse_automorphism("a->ab"));
  for (const char *text : {"a->ab, b->a", "a->aba, b->ba, c->ca", "a->1, b->b"})
    CHECK(cli::parse_automorphism(cli::parse_automorphism(text).str()).str() ==
          cli::parse_automorphism(text).str());
}

TEST_CASE("norm and is-aut") {
  Run r = run({"norm", "a->ab, b->a"});
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
  CHECK(run({"is-aut", "a->a, b->a"}).out == "NO\n");
  CHECK(run({"is-aut", "a->ab, b->a"}).out == "YES\n");
  Run bad = run({"norm", "a->ab"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error") != std::string::npos);
  CHECK(run({"norm", "a->a, b->a"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"norm"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"irreducible", "a->ab, b->a", "--mu", "x"}).code == 2);
  CHECK(run({"irreducible", "a->ab, b->a", "--mu", "2"}).code == 2);
  Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("conjugate") != std::string::npos);
}

TEST_CASE("irreducible") {
  Run r = run({"irreducible", "a->b, b->a"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("REDUCIBLE\nblocks: {a},{b}\n", 0) == 0);
  CHECK(r.err.find("members") != std::string::npos);

  Run j = run({"--json", "irreducible", "a->b, b->a"});
  auto rec = nlohmann::json::parse(j.out);
  CHECK(rec["command"] == "irreducible");
  CHECK(rec["verdict"] == "REDUCIBLE");
  CHECK(rec["witness"]["blocks"] == nlohmann::json::array({"{a}", "{b}"}));
  CHECK(rec["members"] == 1);
  CHECK(rec["max_norm"] == "1");
  CHECK(rec.contains("elapsed"));

  Run fib = run({"irreducible", "a->ab, b->a", "--mu", "5/2"});
  CHECK(fib.out == "IRREDUCIBLE\n");
}

TEST_CASE("conjugate") {
  Run yes = run({"conjugate", "a->ab, b->a", "a->b, b->ba"});
  CHECK(yes.code == 0);
  CHECK(yes.out.rfind("YES\nconjugator:", 0) == 0);
  Run no = run({"conjugate", "a->ab, b->a", "a->b, b->Ba", "--mu", "5/2", "--check-irreducible"});
  CHECK(no.code == 0);
  CHECK(no.out == "NO\n");
  Run red = run({"conjugate", "a->b, b->a", "a->b, b->a", "--check-irreducible"});
  CHECK(red.code == 2);
  Run j = run({"--json", "conjugate", "a->ab, b->a", "a->b, b->ba"});
  auto rec = nlohmann::json::parse(j.out);
  CHECK(rec["verdict"] == "YES");
  CHECK(rec["witness"]["conjugator"]["rank"] == 2);
}

TEST_CASE("human and structured verdicts agree") {
  for (std::vector<std::string> cmd :
       {std::vector<std::string>{"norm", "a->aba, b->ba, c->ca"},
        {"visibly-reducible", "a->ab, b->a, c->c"},
        {"visibly-reducible", "a->ab, b->a"},
        {"is-aut", "a->ab, b->ab"},
        {"displacement", "a->ab, b->a"}}) {
    Run human = run(cmd);
    cmd.insert(cmd.begin(), "--json");
    Run structured = run(cmd);
    auto rec = nlohmann::json::parse(structured.out);
    CHECK(human.out.substr(0, human.out.find('\n')) == rec["verdict"].get<std::string>());
  }
}

TEST_CASE("displacement with a graph file") {
  auto path = std::filesystem::temp_directory_path() / "outfn-cli-theta.txt";
  {
    std::ofstream os(path);
    os << MarkedMetricGraph::standard(TopGraph{2, {{0, 1}, {0, 1}, {0, 1}}},
                                      {Rational(1, 3), Rational(1, 3), Rational(1, 3)})
              .str();
  }
  Run r = run({"displacement", "a->ab, b->a", "--graph", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
  CHECK(run({"displacement", "a->ab, b->a", "--graph", "/nonexistent/file"}).code == 2);
  std::filesystem::remove(path);
  CHECK(run({"displacement", "a->aba, b->ba, c->ca"}).out == "3\n");
}

TEST_CASE("cmt-gens and fold") {
  Run a = run({"cmt-gens", "2"});
  Run b = run({"cmt-gens", "2"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 40);
  CHECK(run({"cmt-gens", "1"}).out == "a->a\na->A\n");

  Run f = run({"fold", "ab, aba"});
  CHECK(f.out.rfind("rank 2\nvertices 1 base 0\n", 0) == 0);
  Run g = run({"fold", "baB", "--rank", "2"});
  CHECK(g.out.rfind("rank 1\nvertices 2", 0) == 0);
}
