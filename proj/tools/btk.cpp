// btk: command-line front end for the Bruhat-Tits tree toolkit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "btk/btk.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitMalformed = 2;

const std::vector<std::string> kDecomposeKinds = {
    "iwasawa",     "cartan",     "bruhat",     "levi",       "iwahori",        "iwasawa-geo",
    "cartan-geo",  "bruhat-geo", "levi-geo",   "iwahori-geo", "k-double-coset", "iwahori-borel-geo"};

struct Options {
  std::uint32_t p = 0;
  std::string backend = "qp";
  std::string format = "json";

  // operands, interpreted per subcommand
  std::string kind;
  std::string matrix;
  std::string ordering = "NPRIME,T,N";
  std::string method = "crossroad";
  std::string x, y, z, x1, x2, y1, y2;
  std::string end, w1, w2, s1, s2;
  std::vector<std::string> ends;
  std::vector<std::string> crossroad_ends;
  std::string center = "(0;0)";
  std::int64_t radius = 2;
  std::int64_t length = 4;
  std::string file;
  std::int64_t level = 1;
  bool find_graft = false;

  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t cases = -1;
  std::int64_t suite_radius = -1;
  std::int64_t suite_level = -1;
};

// Prints a JSON object as "key: value" lines for --format text.
void print_text(const json& j) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_string())
      std::cout << key << ": " << value.get<std::string>() << "\n";
    else
      std::cout << key << ": " << value.dump() << "\n";
  }
}

void emit(const Options& o, const json& j) {
  if (o.format == "text")
    print_text(j);
  else
    std::cout << j.dump(2) << "\n";
}

template <btk::LocalScalar S>
class Runner {
 public:
  explicit Runner(const Options& o) : o_(o), p_(o.p) {}

  btk::Mat2<S> matrix(const std::string& text) const { return btk::Mat2<S>::parse(p_, text); }
  btk::Vertex<S> vertex(const std::string& text, const char* flag) const {
    if (text.empty()) btk::fail(btk::ErrorCode::parse_error, std::string("missing ") + flag);
    return btk::Vertex<S>::parse(p_, text);
  }
  btk::End<S> end(const std::string& text, const char* flag) const {
    if (text.empty()) btk::fail(btk::ErrorCode::parse_error, std::string("missing ") + flag);
    return btk::End<S>::parse(p_, text);
  }

  static json path_json(const btk::Path<S>& path) {
    json out = json::array();
    for (const auto& v : path) out.push_back(v.str());
    return out;
  }

  int decompose() const {
    using namespace btk;
    const Mat2<S> g = matrix(o_.matrix);
    json j;
    j["kind"] = o_.kind;
    j["input"] = g.str();
    json factors = json::array();
    auto factor = [&](const std::string& name, const Mat2<S>& m, std::string_view subgroup) {
      factors.push_back({{"name", name}, {"matrix", m.str()}, {"subgroup", subgroup}});
    };
    bool verified = false;
    if (o_.kind == "iwasawa") {
      const auto f = iwasawa(g);
      factor("b", f.b, "B");
      factor("k", f.k, "K");
      verified = recompose(f) == g && member(f.b, SubgroupTag::B) && member(f.k, SubgroupTag::K);
    } else if (o_.kind == "cartan") {
      const auto f = cartan(g);
      factor("k1", f.k1, "K");
      factor("middle", cartan_middle<S>(p_, f.a, f.b), "T");
      factor("k2", f.k2, "K");
      j["exponents"] = {f.a, f.b};
      verified = recompose(f) == g && member(f.k1, SubgroupTag::K) && member(f.k2, SubgroupTag::K) && f.a <= f.b;
    } else if (o_.kind == "bruhat") {
      const auto f = bruhat(g);
      if (const auto* small = std::get_if<BruhatSmallCell<S>>(&f)) {
        j["cell"] = "B";
        factor("b", small->b, "B");
        verified = member(small->b, SubgroupTag::B);
      } else {
        const auto& big = std::get<BruhatBigCell<S>>(f);
        j["cell"] = "BsB";
        factor("b1", big.b1, "B");
        factor("s", swap_matrix<S>(p_), "s");
        factor("b2", big.b2, "B");
        verified = member(big.b1, SubgroupTag::B) && member(big.b2, SubgroupTag::B);
      }
      verified = verified && recompose(f) == g;
    } else if (o_.kind == "levi") {
      const auto f = levi(g);
      factor("n", f.n, "N");
      factor("t", f.t, "T");
      verified = recompose(f) == g && member(f.n, SubgroupTag::N) && member(f.t, SubgroupTag::T);
    } else if (o_.kind == "iwahori") {
      IwahoriOrdering order{};
      std::stringstream in(o_.ordering);
      std::string part;
      std::size_t count = 0;
      while (std::getline(in, part, ',')) {
        if (count == 3) fail(ErrorCode::parse_error, "ordering needs exactly three subgroups");
        order[count++] = parse_subgroup_tag(part);
      }
      if (count != 3) fail(ErrorCode::parse_error, "ordering needs exactly three subgroups");
      const auto f = iwahori_factor(g, order);
      verified = recompose(f) == g;
      for (std::size_t k = 0; k < 3; ++k) {
        factor("f" + std::to_string(k + 1), f[k], tag_name(order[k]));
        verified = verified && iwahori_part_member(f[k], order[k]);
      }
    } else {
      GeoFactors<S> f;
      if (o_.kind == "iwasawa-geo") f = iwasawa_geo(g);
      else if (o_.kind == "cartan-geo") f = cartan_geo(g);
      else if (o_.kind == "bruhat-geo") f = bruhat_geo(g, o_.method == "unipotent" ? BruhatMethod::unipotent : BruhatMethod::crossroad);
      else if (o_.kind == "levi-geo") f = levi_geo(g);
      else if (o_.kind == "iwahori-geo") f = iwahori_geo(g);
      else if (o_.kind == "k-double-coset") f = k_double_coset(g);
      else f = iwahori_borel_geo(g);
      for (std::size_t k = 0; k < f.factors.size(); ++k)
        factor("f" + std::to_string(k + 1), f.factors[k].matrix, geo_tag_name(f.factors[k].tag));
      j["index"] = f.index;
      j["alpha_cell"] = f.alpha_cell;
      verified = geo_verified(g, f);
    }
    j["factors"] = std::move(factors);
    j["verified"] = verified;
    emit(o_, j);
    return verified ? kExitOk : kExitFailed;
  }

  int distance() const {
    const auto x = vertex(o_.x, "--x");
    const auto y = vertex(o_.y, "--y");
    emit(o_, json{{"x", x.str()}, {"y", y.str()}, {"distance", btk::distance(x, y)}});
    return kExitOk;
  }

  int geodesic() const {
    using namespace btk;
    json j;
    if (!o_.crossroad_ends.empty()) {
      if (o_.crossroad_ends.size() != 3) fail(ErrorCode::parse_error, "--crossroad takes three ends");
      const Vertex<S> c = crossroad(end(o_.crossroad_ends[0], "end"), end(o_.crossroad_ends[1], "end"), end(o_.crossroad_ends[2], "end"));
      j["crossroad"] = c.str();
    } else if (!o_.ends.empty()) {
      if (o_.ends.size() != 2) fail(ErrorCode::parse_error, "--ends takes two ends");
      j["apartment_window"] = path_json(apartment_window(end(o_.ends[0], "end"), end(o_.ends[1], "end"), o_.radius));
    } else if (!o_.end.empty()) {
      j["halfline"] = path_json(halfline(vertex(o_.x, "--x"), end(o_.end, "--end"), o_.length));
    } else {
      const auto path = btk::geodesic(vertex(o_.x, "--x"), vertex(o_.y, "--y"));
      j["length"] = static_cast<std::int64_t>(path.size()) - 1;
      j["path"] = path_json(path);
    }
    emit(o_, j);
    return kExitOk;
  }

  int neighbors() const {
    const auto x = vertex(o_.x, "--x");
    emit(o_, json{{"x", x.str()}, {"neighbors", path_json(btk::neighbors(x))}});
    return kExitOk;
  }

  int ball() const {
    const auto c = vertex(o_.center, "--center");
    if (o_.radius < 0) btk::fail(btk::ErrorCode::parse_error, "radius must be non-negative");
    if (o_.format == "dot") {
      std::cout << btk::ball_dot(c, o_.radius);
      return kExitOk;
    }
    const auto vs = btk::ball(c, o_.radius);
    json edges = json::array();
    for (const auto& e : btk::edges_within(vs)) edges.push_back({e.u.str(), e.v.str()});
    emit(o_, json{{"center", c.str()}, {"radius", o_.radius}, {"vertices", path_json(vs)}, {"edges", std::move(edges)}});
    return kExitOk;
  }

  int act() const {
    const auto g = matrix(o_.matrix);
    json j{{"matrix", g.str()}};
    if (!o_.end.empty()) {
      const auto w = end(o_.end, "--end");
      j["end"] = w.str();
      j["image"] = btk::act(g, w).str();
    } else {
      const auto x = vertex(o_.x, "--x");
      j["x"] = x.str();
      j["image"] = btk::act(g, x).str();
    }
    emit(o_, j);
    return kExitOk;
  }

  int classify() const {
    using namespace btk;
    const auto g = matrix(o_.matrix);
    const auto c = btk::classify(g);
    json j{{"matrix", g.str()}, {"class", aut_kind(c)}, {"translation_length", translation_length(c)}};
    if (const auto* e = std::get_if<Elliptic<S>>(&c)) j["fixed_vertex"] = e->fixed_vertex.str();
    if (const auto* e = std::get_if<Inversion<S>>(&c)) j["edge"] = {e->edge.u.str(), e->edge.v.str()};
    if (const auto* h = std::get_if<Hyperbolic<S>>(&c)) j["axis_window"] = path_json(h->axis_window);
    emit(o_, j);
    return kExitOk;
  }

  int witness() const {
    using namespace btk;
    json j{{"kind", o_.kind}};
    bool verified = false;
    Mat2<S> g;
    if (o_.kind == "sphere") {
      const auto x = vertex(o_.x, "--x"), y = vertex(o_.y, "--y"), z = vertex(o_.z, "--z");
      g = sphere_witness(x, y, z);
      verified = btk::act(g, x) == x && btk::act(g, y) == z;
    } else if (o_.kind == "weak2") {
      const auto a = vertex(o_.x1, "--x1"), b = vertex(o_.x2, "--x2"), c = vertex(o_.y1, "--y1"), d = vertex(o_.y2, "--y2");
      g = weak2_witness(a, b, c, d);
      verified = btk::act(g, a) == c && btk::act(g, b) == d;
    } else if (o_.kind == "end-pair") {
      const auto x = vertex(o_.x, "--x"), y = vertex(o_.y, "--y");
      const auto a = end(o_.w1, "--w1"), b = end(o_.w2, "--w2"), c = end(o_.s1, "--s1"), d = end(o_.s2, "--s2");
      g = end_pair_witness(x, a, b, y, c, d);
      verified = btk::act(g, x) == y && btk::act(g, a) == c && btk::act(g, b) == d;
    } else if (o_.kind == "alpha-tau") {
      const auto at = alpha_tau<S>(p_);
      j["alpha"] = at.alpha.str();
      j["tau"] = at.tau.str();
      j["verified"] = true;
      emit(o_, j);
      return kExitOk;
    } else {
      fail(ErrorCode::parse_error, "unknown witness kind '" + o_.kind + "'");
    }
    j["matrix"] = g.str();
    j["verified"] = verified;
    emit(o_, j);
    return verified ? kExitOk : kExitFailed;
  }

  int ghat_test() const {
    using namespace btk;
    if (o_.find_graft) {
      const auto search = find_graft<S>(p_);
      json j{{"induced_order", search.induced_order}, {"bijection_count", search.bijection_count},
             {"induced_is_full", search.induced_is_full}};
      if (search.graft) j["graft"] = to_json(*search.graft);
      emit(o_, j);
      return kExitOk;
    }
    if (o_.file.empty()) fail(ErrorCode::parse_error, "ghat-test needs --file or --find-graft");
    std::ifstream in(o_.file);
    if (!in) fail(ErrorCode::parse_error, "cannot open " + o_.file);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::parse_error, std::string("invalid JSON: ") + e.what());
    }
    const LocalAut<S> f = local_aut_from_json<S>(doc);
    const auto verdict = ghat_local_test(f, o_.level);
    json j{{"verdict", verdict.locally_pgl2 ? "LOCALLY_PGL2" : "VIOLATION"}, {"level", o_.level}, {"edges_tested", verdict.edges_tested}};
    if (verdict.violation) j["edge"] = {verdict.violation->u.str(), verdict.violation->v.str()};
    emit(o_, j);
    return verdict.locally_pgl2 ? kExitOk : kExitFailed;
  }

  int verify() const {
    btk::VerifyParams params{p_, o_.seed, o_.suite_radius, o_.cases, o_.suite_level};
    const auto report = btk::run_suite<S>(o_.suite, params);
    emit(o_, report.to_json());
    std::cerr << "wall time: " << report.wall_seconds << " s\n";
    return report.passed() ? kExitOk : kExitFailed;
  }

 private:
  const Options& o_;
  std::uint32_t p_;
};

template <btk::LocalScalar S>
int dispatch(const std::string& command, const Options& o) {
  Runner<S> r(o);
  if (command == "decompose") return r.decompose();
  if (command == "distance") return r.distance();
  if (command == "geodesic") return r.geodesic();
  if (command == "neighbors") return r.neighbors();
  if (command == "ball") return r.ball();
  if (command == "act") return r.act();
  if (command == "classify") return r.classify();
  if (command == "witness") return r.witness();
  if (command == "ghat-test") return r.ghat_test();
  return r.verify();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"btk: exact computations on the Bruhat-Tits tree of PGL2 over Q_p or F_p((t))"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--p", o.p, "residue characteristic (prime)")->envname("BTK_P");
  app.add_option("--backend", o.backend, "field backend")->check(CLI::IsMember({"qp", "laurent"}));
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text", "dot"}));

  auto* decompose = app.add_subcommand("decompose", "matrix decompositions (algebraic and geometric)");
  decompose->add_option("--kind", o.kind, "decomposition")->required()->check(CLI::IsMember(kDecomposeKinds));
  decompose->add_option("--matrix", o.matrix, "matrix 'a,b;c,d'")->required();
  decompose->add_option("--ordering", o.ordering, "Iwahori factor order, e.g. NPRIME,T,N");
  decompose->add_option("--method", o.method, "bruhat-geo route")->check(CLI::IsMember({"crossroad", "unipotent"}));

  auto* distance = app.add_subcommand("distance", "tree distance between two vertices");
  distance->add_option("--x", o.x, "vertex '(m;c)'")->required();
  distance->add_option("--y", o.y, "vertex '(m;c)'")->required();

  auto* geodesic = app.add_subcommand("geodesic", "geodesic, half-line, apartment window or crossroad");
  geodesic->add_option("--x", o.x, "start vertex");
  geodesic->add_option("--y", o.y, "end vertex");
  geodesic->add_option("--end", o.end, "end '[u:v]' for a half-line from --x");
  geodesic->add_option("--length", o.length, "half-line length");
  geodesic->add_option("--ends", o.ends, "two ends: apartment window")->expected(2);
  geodesic->add_option("--radius", o.radius, "apartment window radius");
  geodesic->add_option("--crossroad", o.crossroad_ends, "three ends: their crossroad")->expected(3);

  auto* neighbors = app.add_subcommand("neighbors", "the p+1 neighbours of a vertex");
  neighbors->add_option("--x", o.x, "vertex")->required();

  auto* ball = app.add_subcommand("ball", "ball around a vertex (JSON or DOT)");
  ball->add_option("--center", o.center, "center vertex");
  ball->add_option("--radius", o.radius, "radius")->required();

  auto* act = app.add_subcommand("act", "image of a vertex or end under a matrix");
  act->add_option("--matrix", o.matrix, "matrix")->required();
  act->add_option("--x", o.x, "vertex");
  act->add_option("--end", o.end, "end");

  auto* classify = app.add_subcommand("classify", "elliptic / inversion / hyperbolic");
  classify->add_option("--matrix", o.matrix, "matrix")->required();

  auto* witness = app.add_subcommand("witness", "transitivity witnesses");
  witness->add_option("--kind", o.kind, "witness kind")->required()->check(CLI::IsMember({"sphere", "weak2", "end-pair", "alpha-tau"}));
  for (auto [flag, target] : std::initializer_list<std::pair<const char*, std::string*>>{
           {"--x", &o.x}, {"--y", &o.y}, {"--z", &o.z}, {"--x1", &o.x1}, {"--x2", &o.x2}, {"--y1", &o.y1}, {"--y2", &o.y2},
           {"--w1", &o.w1}, {"--w2", &o.w2}, {"--s1", &o.s1}, {"--s2", &o.s2}})
    witness->add_option(flag, *target);

  auto* ghat = app.add_subcommand("ghat-test", "local PGL2 test of a finite-ball automorphism");
  ghat->add_option("--file", o.file, "LocalAut JSON file");
  ghat->add_option("--level", o.level, "level e");
  ghat->add_flag("--find-graft", o.find_graft, "search for a ball bijection outside PGL2 at level 1");

  auto* verify = app.add_subcommand("verify", "run a property suite");
  std::vector<std::string> suites(btk::kSuiteNames.begin(), btk::kSuiteNames.end());
  verify->add_option("--suite", o.suite, "suite name")->required()->check(CLI::IsMember(suites));
  verify->add_option("--seed", o.seed, "RNG seed")->required();
  verify->add_option("--cases", o.cases, "number of random cases");
  verify->add_option("--radius", o.suite_radius, "radius parameter");
  verify->add_option("--level", o.suite_level, "level parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitMalformed;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto field = btk::FieldConfig::make(btk::parse_backend(o.backend), o.p);
    (void)field;
    if (o.backend == "laurent") return dispatch<btk::Laurent>(command, o);
    return dispatch<btk::Qp>(command, o);
  } catch (const btk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == btk::ErrorCode::internal ? kExitFailed : kExitMalformed;
  }
}
