// loopgauge: build qubit states, decompose two-qubit correlation matrices,
// assign parallel transporters, and evaluate Wilson-loop twist.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "loopgauge/verification.hpp"

namespace lg = loopgauge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw lg::Error(lg::ErrorCode::usage,
                      "--params expects k=v pairs, got '" + item + "'");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

std::vector<int> parse_loop(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f)
      throw lg::Error(lg::ErrorCode::usage, "cannot write " + out_path);
    f << j.dump(2) << "\n";
  }
}

struct StateSource {
  std::string state_path;
  std::string catalog_name;
  std::string params_text;

  lg::DensityMatrix load() const {
    if (!state_path.empty() && !catalog_name.empty())
      throw lg::Error(lg::ErrorCode::usage,
                      "--state and --catalog are mutually exclusive");
    if (!state_path.empty()) return lg::load_state(state_path);
    if (!catalog_name.empty())
      return lg::catalog(catalog_name, parse_params(params_text));
    throw lg::Error(lg::ErrorCode::usage, "need --state or --catalog");
  }
};

int sweep_threads() {
  if (const char* env = std::getenv("LOOPGAUGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation-holonomy toolkit"};
  app.require_subcommand(1);

  StateSource src;
  std::string loop_text = "0,1";
  std::string method_name = "sqrt";
  std::string out_path;
  std::string format = "json";
  double tolerance = 1e-8;
  uint64_t seed = 7;
  std::string pair_text = "0,1";

  auto add_state_opts = [&](CLI::App* cmd) {
    cmd->add_option("--state", src.state_path, "state JSON file");
    cmd->add_option("--catalog", src.catalog_name, "named catalog state");
    cmd->add_option("--params", src.params_text, "catalog parameters k=v,...");
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output path (stdout when empty)");
    cmd->add_option("--format", format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    cmd->add_option("--tolerance", tolerance, "numerical tolerance override");
    cmd->add_option("--seed", seed, "seed for randomized evaluations");
  };

  auto* state_cmd = app.add_subcommand("state", "state utilities");
  auto* state_build = state_cmd->add_subcommand("build", "materialize a state");
  add_state_opts(state_build);
  add_common(state_build);

  auto* corr_cmd = app.add_subcommand("corr", "correlation matrix of a link");
  add_state_opts(corr_cmd);
  add_common(corr_cmd);
  corr_cmd->add_option("--pair", pair_text, "ordered qubit pair i,j");

  auto* lsvd_cmd = app.add_subcommand("lsvd", "Lorentz SVD of a link");
  add_state_opts(lsvd_cmd);
  add_common(lsvd_cmd);
  lsvd_cmd->add_option("--pair", pair_text, "ordered qubit pair i,j");
  lsvd_cmd->add_option("--method", method_name,
                       "eigen|iterative (full decompositions)")
      ->check(CLI::IsMember({"eigen", "iterative"}));

  auto* trans_cmd = app.add_subcommand("transporter", "parallel transporter");
  add_state_opts(trans_cmd);
  add_common(trans_cmd);
  trans_cmd->add_option("--pair", pair_text, "ordered qubit pair i,j");
  trans_cmd->add_option("--method", method_name, "eigen|iterative|sqrt")
      ->check(CLI::IsMember({"eigen", "iterative", "sqrt"}));

  auto* twist_cmd = app.add_subcommand("twist", "Wilson-loop twist");
  add_state_opts(twist_cmd);
  add_common(twist_cmd);
  twist_cmd->add_option("--loop", loop_text, "loop as qubit indices i,j,k,...");
  twist_cmd->add_option("--method", method_name, "eigen|iterative|sqrt")
      ->check(CLI::IsMember({"eigen", "iterative", "sqrt"}));

  auto* proto_cmd = app.add_subcommand("protocol", "untwisting protocol");
  add_state_opts(proto_cmd);
  add_common(proto_cmd);
  proto_cmd->add_option("--loop", loop_text, "loop as qubit indices");
  proto_cmd->add_option("--method", method_name, "eigen|iterative|sqrt")
      ->check(CLI::IsMember({"eigen", "iterative", "sqrt"}));

  auto* verify_cmd = app.add_subcommand("verify", "verification catalog");
  add_common(verify_cmd);
  std::vector<std::string> claim_selection;
  bool verify_all = false;
  verify_cmd->add_flag("--all", verify_all, "run every claim");
  verify_cmd->add_option("--claims", claim_selection, "claim ids to run")
      ->delimiter(',');

  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps");
  add_common(sweep_cmd);
  std::string family = "rank4_family";
  int grid_points = 50;
  sweep_cmd->add_option("--catalog", family, "rank3_family|rank4_family")
      ->check(CLI::IsMember({"rank3_family", "rank4_family"}));
  sweep_cmd->add_option("--grid", grid_points, "number of grid points");
  sweep_cmd->add_option("--loop", loop_text, "loop as qubit indices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (state_build->parsed()) {
      const lg::DensityMatrix dm = src.load();
      emit(nlohmann::json(dm), out_path);
      return kExitOk;
    }

    if (corr_cmd->parsed()) {
      const auto pair = parse_loop(pair_text);
      if (pair.size() != 2)
        throw lg::Error(lg::ErrorCode::usage, "--pair needs two indices");
      lg::CorrelationMatrix s = lg::corr_matrix(
          lg::marginal(src.load(), {pair[0], pair[1]}));
      s.qubit_a = pair[0];
      s.qubit_b = pair[1];
      emit(lg::corr_to_json(s), out_path);
      return kExitOk;
    }

    if (lsvd_cmd->parsed() || trans_cmd->parsed()) {
      const auto pair = parse_loop(pair_text);
      if (pair.size() != 2)
        throw lg::Error(lg::ErrorCode::usage, "--pair needs two indices");
      lg::CorrelationMatrix s = lg::corr_matrix(
          lg::marginal(src.load(), {pair[0], pair[1]}));
      s.qubit_a = pair[0];
      s.qubit_b = pair[1];
      const lg::Method method = lg::method_from_string(method_name);
      if (lsvd_cmd->parsed()) {
        const lg::LorentzSvd d = method == lg::Method::iterative
                                     ? lg::lorentz_svd_iterative(s)
                                     : lg::lorentz_svd_eigen(s);
        if (d.residual > tolerance)
          throw lg::Error(lg::ErrorCode::no_convergence,
                          "decomposition residual " +
                              std::to_string(d.residual) +
                              " exceeds the requested tolerance");
        emit(lg::lsvd_to_json(d), out_path);
      } else {
        const lg::Transporter t = lg::transporter(s, method);
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < 4; ++r) {
          nlohmann::json row = nlohmann::json::array();
          for (int c = 0; c < 4; ++c) row.push_back(t.lambda.m(r, c));
          rows.push_back(row);
        }
        emit(nlohmann::json{{"pair", {t.qubit_a, t.qubit_b}},
                            {"lambda", rows},
                            {"method", lg::method_name(t.method)},
                            {"symmetry_defect", t.symmetry_defect}},
             out_path);
      }
      return kExitOk;
    }

    if (twist_cmd->parsed()) {
      const lg::Method method = lg::method_from_string(method_name);
      if (twist_cmd->count("--tolerance") == 0)
        tolerance = method == lg::Method::iterative ? 1e-6 : 1e-8;
      const lg::TwistReport r = lg::twist(src.load(), parse_loop(loop_text),
                                          method);
      for (const auto& link : r.links)
        if (link.symmetry_defect > tolerance)
          throw lg::Error(lg::ErrorCode::no_convergence,
                          "link symmetry defect exceeds the requested "
                          "tolerance");
      if (format == "table") {
        std::ostringstream os;
        os.precision(17);
        os << "loop";
        for (int q : r.loop) os << " " << q;
        os << "\nxi         " << r.xi << "\neigenvalues";
        for (int k = 0; k < 4; ++k)
          os << " (" << r.eigenvalues(k).real() << ", "
             << r.eigenvalues(k).imag() << ")";
        os << "\nmethod     " << lg::method_name(method) << "\n";
        std::cout << os.str();
        if (!out_path.empty()) emit(lg::twist_to_json(r), out_path);
      } else {
        emit(lg::twist_to_json(r), out_path);
      }
      return kExitOk;
    }

    if (proto_cmd->parsed()) {
      const lg::ProtocolTrace tr = lg::untwist_protocol(
          src.load(), parse_loop(loop_text),
          lg::method_from_string(method_name));
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& st : tr.steps) {
        steps.push_back(
            {{"qubit", st.qubit},
             {"weight", st.weight},
             {"link_symmetry_defect", st.link_symmetry_defect},
             {"op",
              {{st.op(0, 0).real(), st.op(0, 0).imag()},
               {st.op(0, 1).real(), st.op(0, 1).imag()},
               {st.op(1, 0).real(), st.op(1, 0).imag()},
               {st.op(1, 1).real(), st.op(1, 1).imag()}}}});
      }
      nlohmann::json mism = nlohmann::json::array();
      for (int r = 0; r < 4; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) row.push_back(tr.final_mismatch(r, c));
        mism.push_back(row);
      }
      emit(nlohmann::json{{"steps", steps},
                          {"final_mismatch", mism},
                          {"spectrum_match_error", tr.spectrum_match_error},
                          {"reference", lg::twist_to_json(tr.reference)}},
           out_path);
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      const std::vector<lg::ClaimResult> results =
          lg::verify_catalog(verify_all ? std::vector<std::string>{}
                                        : claim_selection,
                             seed);
      bool all_pass = true;
      std::cout << std::left << std::setw(34) << "claim" << std::setw(8)
                << "status" << std::setw(10) << "runtime"
                << "result\n";
      for (const auto& r : results) {
        all_pass &= r.pass;
        std::ostringstream rt;
        rt << std::fixed << std::setprecision(2) << r.runtime_seconds << "s";
        std::cout << std::left << std::setw(34) << r.id << std::setw(8)
                  << (r.pass ? "pass" : "FAIL") << std::setw(10) << rt.str()
                  << r.computed << "\n";
      }
      if (!out_path.empty()) emit(lg::claims_to_json(results), out_path);
      return all_pass ? kExitOk : kExitClaimFailure;
    }

    if (sweep_cmd->parsed()) {
      const std::vector<int> loop = parse_loop(loop_text.empty() ? "0,1,2"
                                                                 : loop_text);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> ud(0.0, 1.0);
      struct Point {
        std::map<std::string, double> params;
      };
      std::vector<Point> points(grid_points);
      for (auto& pt : points) {
        if (family == "rank4_family") {
          pt.params = {{"p", 0.05 + 0.9 * ud(rng)},
                       {"x", 0.2 + 0.8 * ud(rng)},
                       {"y", 0.2 + 0.8 * ud(rng)},
                       {"z", 0.2 + 0.8 * ud(rng)}};
        } else {
          pt.params = {{"p", 0.1 + 0.8 * ud(rng)},
                       {"x", 0.15 + 0.85 * ud(rng)},
                       {"y", 0.15 + 0.85 * ud(rng)},
                       {"z", 0.15 + 0.85 * ud(rng)},
                       {"w", 0.15 + 0.85 * ud(rng)}};
        }
      }

      std::vector<nlohmann::json> results(points.size());
      std::atomic<size_t> next{0};
      const int n_threads =
          std::min<int>(sweep_threads(), static_cast<int>(points.size()));
      auto worker = [&]() {
        for (;;) {
          const size_t i = next.fetch_add(1);
          if (i >= points.size()) return;
          nlohmann::json entry{{"params", points[i].params}};
          try {
            const lg::DensityMatrix dm = lg::catalog(family, points[i].params);
            const lg::TwistReport r = lg::twist(dm, loop, lg::Method::sqrt);
            entry["xi"] = r.xi;
            nlohmann::json eig = nlohmann::json::array();
            for (int k = 0; k < 4; ++k)
              eig.push_back(
                  {r.eigenvalues(k).real(), r.eigenvalues(k).imag()});
            entry["eigenvalues"] = eig;
            if (family == "rank4_family") {
              const auto f = lg::rank4_closed_form(
                  points[i].params.at("p"), points[i].params.at("x"),
                  points[i].params.at("y"), points[i].params.at("z"));
              entry["xi_closed_form"] = f.xi;
            }
          } catch (const lg::Error& e) {
            entry["error"] = e.what();
          }
          results[i] = std::move(entry);
        }
      };
      std::vector<std::thread> pool;
      for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      nlohmann::json arr = nlohmann::json::array();
      for (auto& r : results) arr.push_back(std::move(r));
      emit(arr, out_path);
      return kExitOk;
    }

    throw lg::Error(lg::ErrorCode::usage, "no subcommand");
  } catch (const lg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == lg::ErrorCode::usage ? kExitUsage : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
