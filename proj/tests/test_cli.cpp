#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qlab/acceptance.hpp"
#include "qlab/basis.hpp"
#include "qlab/catalog.hpp"
#include "qlab/measure.hpp"
#include "qlab/qubits.hpp"
#include "qlab/relcheck.hpp"
#include "qlab/report.hpp"

using namespace qlab;
using catalog::config_error;
using catalog::ParamSpec;
using catalog::Params;
using catalog::ParamType;
using Catch::Matchers::ContainsSubstring;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("catalog shape and lookup") {
    const auto& all = catalog::entries();
    REQUIRE(all.size() == 12);
    REQUIRE(std::is_sorted(all.begin(), all.end(),
                           [](const auto& a, const auto& b) { return a.name < b.name; }));
    REQUIRE(catalog::find("coherence_revival") != nullptr);
    REQUIRE(catalog::find("no_such_thing") == nullptr);
    REQUIRE_THROWS_AS(catalog::run_by_name("no_such_thing", {}, 1), config_error);

    const std::string listing = catalog::listing();
    REQUIRE_THAT(listing, ContainsSubstring("coherence_revival") &&
                              ContainsSubstring("--param n_env=<int>") &&
                              ContainsSubstring("delta_plus_check"));
}

TEST_CASE("every entry passes with its default parameters") {
    for (const auto& entry : catalog::entries()) {
        if (entry.name == "acceptance_suite") continue; // exercised by its own binary
        INFO(entry.name);
        const auto report = catalog::run_by_name(entry.name, {}, 20260814);
        CHECK(report.all_pass());
        REQUIRE_FALSE(report.name.empty());
    }
}

TEST_CASE("parameter validation names the offending key") {
    const auto failure_message = [](const std::string& name, const std::string& key,
                                    const std::string& value) -> std::string {
        try {
            catalog::run_by_name(name, {{key, value}}, 1);
        } catch (const config_error& e) {
            return e.what();
        }
        return "<no error raised>";
    };
    REQUIRE_THAT(failure_message("coherence_revival", "bogus", "1"),
                 ContainsSubstring("bogus") && ContainsSubstring("n_env"));
    REQUIRE_THAT(failure_message("coherence_revival", "n_env", "frog"),
                 ContainsSubstring("n_env"));
    REQUIRE_THAT(failure_message("coherence_revival", "n_env", "99"),
                 ContainsSubstring("out of range"));
    REQUIRE_THAT(failure_message("coherence_revival", "collapse", "maybe"),
                 ContainsSubstring("collapse"));
    REQUIRE_THAT(failure_message("bell_recording", "c1", "1,2,3"), ContainsSubstring("c1"));
    REQUIRE_THAT(failure_message("aharonov_albert_jz", "pointer_dim", "6"),
                 ContainsSubstring("odd"));
    REQUIRE_THAT(failure_message("recordable_basis_explorer", "target", "ghz"),
                 ContainsSubstring("target"));
}

TEST_CASE("typed parameter views") {
    const std::vector<ParamSpec> schema{
        {"n", ParamType::integer, "3", ""},
        {"x", ParamType::real, "0.25", ""},
        {"flag", ParamType::boolean, "false", ""},
        {"amp", ParamType::complex_pair, "1.5", ""},
        {"dir", ParamType::basis_spec, "z", ""},
        {"state", ParamType::text, "singlet", ""},
    };
    const Params defaults(schema, {});
    REQUIRE(defaults.integer("n") == 3);
    REQUIRE(defaults.real("x") == Catch::Approx(0.25));
    REQUIRE_FALSE(defaults.boolean("flag"));
    REQUIRE(defaults.complex_pair("amp") == cxd(1.5, 0.0));
    REQUIRE(defaults.text("state") == "singlet");

    const Params overridden(schema, {{"n", "7"}, {"flag", "1"}, {"amp", "0.6,-0.8"}});
    REQUIRE(overridden.integer("n") == 7);
    REQUIRE(overridden.boolean("flag"));
    REQUIRE(overridden.complex_pair("amp") == cxd(0.6, -0.8));

    REQUIRE_THROWS_AS(defaults.real("n"), config_error);        // type mismatch
    REQUIRE_THROWS_AS(defaults.integer("missing"), config_error);
    const std::map<std::string, std::string> malformed{{"n", "2x"}};
    REQUIRE_THROWS_AS(Params(schema, malformed), config_error);
}

TEST_CASE("named two-spin states") {
    const char* names[] = {"up_up",   "up_down",      "down_up",   "down_down",
                           "singlet", "triplet_zero", "plus_plus", "plus_minus"};
    for (const char* name : names) {
        const StateVector psi = catalog::named_two_spin_state(name);
        REQUIRE(psi.space() == CompositeSpace({2, 2}));
        REQUIRE(std::abs(psi.amplitudes().norm() - 1.0) < 1e-14);
    }
    const StateVector singlet = catalog::named_two_spin_state("singlet");
    const double s = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(singlet.amplitudes()(1) - cxd(s, 0.0)) < 1e-14);
    REQUIRE(std::abs(singlet.amplitudes()(2) + cxd(s, 0.0)) < 1e-14);
    const StateVector pp = catalog::named_two_spin_state("plus_plus");
    for (int i = 0; i < 4; ++i) REQUIRE(std::abs(pp.amplitudes()(i) - cxd(0.5, 0.0)) < 1e-14);
    REQUIRE_THROWS_AS(catalog::named_two_spin_state("frog"), config_error);
}

TEST_CASE("basis specifications") {
    REQUIRE((catalog::parse_basis_spec("z").columns() - z_basis().columns()).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((catalog::parse_basis_spec("x").columns() - x_basis().columns()).cwiseAbs().maxCoeff() == 0.0);
    const Basis tilted = catalog::parse_basis_spec("bloch:0.7,0.3");
    REQUIRE(tilted.space() == qubit());
    REQUIRE_THROWS_AS(catalog::parse_basis_spec("y"), config_error);
    REQUIRE_THROWS_AS(catalog::parse_basis_spec("bloch:1.0"), config_error);
    REQUIRE_THROWS_AS(catalog::parse_basis_spec("bloch:a,b"), config_error);
}

TEST_CASE("canonical number rendering") {
    REQUIRE(report::format_double(0.5) == "5.0000000000000000e-01");
    REQUIRE(report::format_double(-1.0) == "-1.0000000000000000e+00");
    REQUIRE(report::format_double(0.0) == "0.0000000000000000e+00");
}

TEST_CASE("text rendering is sorted and line oriented") {
    scenarios::ScenarioReport r;
    r.name = "demo";
    r.check("zeta", 1.0, 1.0, 0.0);
    r.check("alpha", 2.0, 2.5, 1.0);
    r.branches.push_back({"m_branch", 0.5, true, 1});
    r.branches.push_back({"a_branch", 0.5, false, 2});
    r.notes = {"first note", "second note"};
    REQUIRE(r.all_pass());

    const auto lines = lines_of(report::to_text(r));
    REQUIRE(lines.size() == 9);
    REQUIRE(lines[0] == "report demo");
    REQUIRE(lines[1] == "status PASS");
    REQUIRE(lines[2] ==
            "quantity alpha predicted 2.0000000000000000e+00 expected 2.5000000000000000e+00 "
            "tolerance 1.0000000000000000e+00 PASS");
    REQUIRE(lines[3].rfind("quantity zeta ", 0) == 0);
    REQUIRE(lines[4] ==
            "branch a_branch weight 5.0000000000000000e-01 product 0 schmidt_rank 2");
    REQUIRE(lines[5] ==
            "branch m_branch weight 5.0000000000000000e-01 product 1 schmidt_rank 1");
    REQUIRE(lines[6] == "note first note");
    REQUIRE(lines[7] == "note second note");
    REQUIRE(lines[8] == "end demo");

    r.check("failing", 1.0, 0.0, 0.1);
    REQUIRE_FALSE(r.all_pass());
    REQUIRE(lines_of(report::to_text(r))[1] == "status FAIL");
}

TEST_CASE("json rendering mirrors the text content") {
    scenarios::ScenarioReport r;
    r.name = "demo";
    r.check("zeta", 1.0, 1.0, 0.0);
    r.check("alpha", 2.0, 2.5, 1.0);
    r.branches.push_back({"a_branch", 0.5, false, 2});
    r.notes = {"only note"};

    const std::string text = report::to_json(r);
    REQUIRE(text.back() == '\n');
    const auto doc = nlohmann::json::parse(text);
    REQUIRE(doc["name"] == "demo");
    REQUIRE(doc["pass"] == true);
    REQUIRE(doc["quantities"].size() == 2);
    REQUIRE(doc["quantities"][0]["label"] == "alpha");
    REQUIRE(doc["quantities"][1]["label"] == "zeta");
    REQUIRE(doc["quantities"][0]["tolerance"] == 1.0);
    REQUIRE(doc["branches"][0]["label"] == "a_branch");
    REQUIRE(doc["branches"][0]["schmidt_rank"] == 2);
    REQUIRE(doc["branches"][0]["product_across_cut"] == false);
    REQUIRE(doc["notes"].size() == 1);
}

TEST_CASE("report files are written as a text and json pair") {
    scenarios::ScenarioReport r;
    r.name = "file_demo";
    r.check("alpha", 1.0, 1.0, 0.0);
    const std::filesystem::path dir = "report_test_out";
    const auto paths = report::write_files(r, dir);
    REQUIRE(paths.size() == 2);
    REQUIRE(paths[0].extension() == ".txt");
    REQUIRE(paths[1].extension() == ".json");
    REQUIRE(slurp(paths[0]) == report::to_text(r));
    REQUIRE(slurp(paths[1]) == report::to_json(r));

    std::vector<fieldnum::SweepRow> rows(1);
    rows[0].point = {0.1, 1.0, 0.5};
    rows[0].s_squared = rows[0].point.invariant();
    rows[0].sym_mag = 0.25;
    const std::string sweep_text = report::sweep_to_text(rows);
    REQUIRE_THAT(sweep_text,
                 ContainsSubstring(
                     "columns m t r kind s_squared antisym_mag sym_mag closed_form_rel_dev"));
    REQUIRE_THAT(sweep_text, ContainsSubstring("row ") && ContainsSubstring(" spacelike "));
    const auto sweep_doc = nlohmann::json::parse(report::sweep_to_json(rows));
    REQUIRE(sweep_doc["rows"].size() == 1);
    REQUIRE(sweep_doc["rows"][0]["kind"] == "spacelike");
    const auto sweep_paths = report::write_sweep_files(rows, "sweep_demo", dir);
    REQUIRE(slurp(sweep_paths[0]) == sweep_text);
}

TEST_CASE("identical configuration and seed give identical bytes") {
    const auto a = catalog::run_by_name("no_communication_game",
                                        {{"n_pairs", "20"}, {"n_rounds", "50"}}, 5);
    const auto b = catalog::run_by_name("no_communication_game",
                                        {{"n_pairs", "20"}, {"n_rounds", "50"}}, 5);
    REQUIRE(report::to_text(a) == report::to_text(b));
    REQUIRE(report::to_json(a) == report::to_json(b));

    const auto c = catalog::run_by_name("bell_recording", {}, 1);
    const auto d = catalog::run_by_name("bell_recording", {}, 2);
    REQUIRE(report::to_text(c) == report::to_text(d)); // deterministic scenario
}

TEST_CASE("checker results render through the same pipeline") {
    const CompositeSpace pair({2, 2});
    Vector amps = Vector::Zero(4);
    amps(0) = 1.0 / std::sqrt(2.0);
    amps(3) = 1.0 / std::sqrt(2.0);
    const auto eta = measure::decoherence_eta(StateVector(amps, pair), z_basis());
    const auto eta_report = report::as_report(eta, "eta_demo");
    REQUIRE(eta_report.name == "eta_demo");
    REQUIRE(eta_report.all_pass()); // informational: no pinned quantities
    const std::string eta_text = report::to_text(eta_report);
    REQUIRE_THAT(eta_text, ContainsSubstring("note eta = ") &&
                               ContainsSubstring("note weight_0 = ") &&
                               ContainsSubstring("note overlap_01 = "));

    auto violation =
        relcheck::check_mc(cnot(), spectral_decomposition(sigma_x()),
                           bell_basis().vector(0).density());
    REQUIRE(violation.magnitude == Catch::Approx(1.0).margin(1e-12));
    violation.magnitude = 1.0; // pin so the rendered text is exact
    const std::string v_text = report::to_text(report::as_report(violation, "violation_demo"));
    REQUIRE_THAT(v_text,
                 ContainsSubstring("violation_magnitude = 1.0000000000000000e+00") &&
                     ContainsSubstring("witness_attached = 1"));

    const auto fac = relcheck::factorize_unitary(cnot(), 2, 2);
    const std::string f_text = report::to_text(report::as_report(fac, "factorization_demo"));
    REQUIRE_THAT(f_text, ContainsSubstring("note residual = ") &&
                             ContainsSubstring("note alignment_phase = "));
}

TEST_CASE("acceptance summary formatting") {
    std::vector<acceptance::CriterionResult> results;
    results.push_back({1, "alpha_check", true, "ok detail", 1.25});
    results.push_back({2, "beta_check", false, "bad detail", 0.5});

    REQUIRE_FALSE(acceptance::all_pass(results));
    REQUIRE(acceptance::all_pass({results[0]}));

    const std::string summary = acceptance::summary_lines(results);
    const auto lines = lines_of(summary);
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[0].rfind("criterion 01 alpha_check", 0) == 0);
    REQUIRE_THAT(lines[0], ContainsSubstring("PASS") && ContainsSubstring("(1.25 s)") &&
                               ContainsSubstring("ok detail"));
    REQUIRE_THAT(lines[1], ContainsSubstring("FAIL"));

    const auto report = acceptance::as_report(results);
    REQUIRE(report.name == "acceptance_suite");
    REQUIRE(report.quantities.size() == 2);
    REQUIRE(report.quantities[0].label == "01_alpha_check");
    REQUIRE(report.quantities[0].pass);
    REQUIRE(report.quantities[1].label == "02_beta_check");
    REQUIRE_FALSE(report.quantities[1].pass);
    REQUIRE_FALSE(report.all_pass());
    REQUIRE_THAT(report::to_text(report),
                 ContainsSubstring("note 02_beta_check: bad detail (0.50 s)"));
}
