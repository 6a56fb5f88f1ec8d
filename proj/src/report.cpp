#include "qlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qlab::report {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string kind_name(fieldnum::IntervalPoint::Kind kind) {
    switch (kind) {
    case fieldnum::IntervalPoint::Kind::spacelike: return "spacelike";
    case fieldnum::IntervalPoint::Kind::timelike: return "timelike";
    case fieldnum::IntervalPoint::Kind::lightlike: return "lightlike";
    }
    throw std::logic_error("unreachable interval kind");
}

template <typename Record>
std::vector<const Record*> sorted_by_label(const std::vector<Record>& records) {
    std::vector<const Record*> ptrs;
    ptrs.reserve(records.size());
    for (const Record& r : records) ptrs.push_back(&r);
    std::stable_sort(ptrs.begin(), ptrs.end(),
                     [](const Record* a, const Record* b) { return a->label < b->label; });
    return ptrs;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string to_text(const scenarios::ScenarioReport& report) {
    std::ostringstream out;
    out << "report " << report.name << "\n";
    out << "status " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
    for (const scenarios::Quantity* q : sorted_by_label(report.quantities)) {
        out << "quantity " << q->label << " predicted " << format_double(q->predicted)
            << " expected " << format_double(q->expected) << " tolerance "
            << format_double(q->tolerance) << ' ' << (q->pass ? "PASS" : "FAIL") << "\n";
    }
    for (const scenarios::BranchInfo* b : sorted_by_label(report.branches)) {
        out << "branch " << b->label << " weight " << format_double(b->weight) << " product "
            << (b->product_across_cut ? 1 : 0) << " schmidt_rank " << b->schmidt_rank << "\n";
    }
    for (const std::string& note : report.notes) out << "note " << note << "\n";
    out << "end " << report.name << "\n";
    return out.str();
}

std::string to_json(const scenarios::ScenarioReport& report) {
    ordered_json doc;
    doc["name"] = report.name;
    doc["pass"] = report.all_pass();
    doc["quantities"] = ordered_json::array();
    for (const scenarios::Quantity* q : sorted_by_label(report.quantities)) {
        ordered_json item;
        item["label"] = q->label;
        item["predicted"] = q->predicted;
        item["expected"] = q->expected;
        item["tolerance"] = q->tolerance;
        item["pass"] = q->pass;
        doc["quantities"].push_back(std::move(item));
    }
    doc["branches"] = ordered_json::array();
    for (const scenarios::BranchInfo* b : sorted_by_label(report.branches)) {
        ordered_json item;
        item["label"] = b->label;
        item["weight"] = b->weight;
        item["product_across_cut"] = b->product_across_cut;
        item["schmidt_rank"] = b->schmidt_rank;
        doc["branches"].push_back(std::move(item));
    }
    doc["notes"] = report.notes;
    return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_files(const scenarios::ScenarioReport& report,
                                               const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path text_path = out_dir / (report.name + ".txt");
    const std::filesystem::path json_path = out_dir / (report.name + ".json");
    write_text_file(text_path, to_text(report));
    write_text_file(json_path, to_json(report));
    return {text_path, json_path};
}

std::string sweep_to_text(const std::vector<fieldnum::SweepRow>& rows) {
    std::ostringstream out;
    out << "report delta-plus-sweep\n";
    out << "columns m t r kind s_squared antisym_mag sym_mag closed_form_rel_dev\n";
    for (const fieldnum::SweepRow& row : rows) {
        out << "row " << format_double(row.point.m) << ' ' << format_double(row.point.t) << ' '
            << format_double(row.point.r) << ' ' << kind_name(row.point.kind()) << ' '
            << format_double(row.s_squared) << ' ' << format_double(row.antisym_mag) << ' '
            << format_double(row.sym_mag) << ' ' << format_double(row.closed_form_rel_dev)
            << "\n";
    }
    out << "end delta-plus-sweep\n";
    return out.str();
}

std::string sweep_to_json(const std::vector<fieldnum::SweepRow>& rows) {
    ordered_json doc;
    doc["name"] = "delta-plus-sweep";
    doc["rows"] = ordered_json::array();
    for (const fieldnum::SweepRow& row : rows) {
        ordered_json item;
        item["m"] = row.point.m;
        item["t"] = row.point.t;
        item["r"] = row.point.r;
        item["kind"] = kind_name(row.point.kind());
        item["s_squared"] = row.s_squared;
        item["antisym_mag"] = row.antisym_mag;
        item["sym_mag"] = row.sym_mag;
        item["closed_form_rel_dev"] = row.closed_form_rel_dev;
        doc["rows"].push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_sweep_files(const std::vector<fieldnum::SweepRow>& rows,
                                                     const std::string& name,
                                                     const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path text_path = out_dir / (name + ".txt");
    const std::filesystem::path json_path = out_dir / (name + ".json");
    write_text_file(text_path, sweep_to_text(rows));
    write_text_file(json_path, sweep_to_json(rows));
    return {text_path, json_path};
}

scenarios::ScenarioReport as_report(const measure::EtaReport& eta, std::string name) {
    scenarios::ScenarioReport report;
    report.name = std::move(name);
    report.notes.push_back("eta = " + format_double(eta.eta));
    report.notes.push_back("basis = " + eta.basis_label);
    for (std::size_t i = 0; i < eta.weights.size(); ++i) {
        report.notes.push_back("weight_" + std::to_string(i) + " = " +
                               format_double(eta.weights[i]));
    }
    for (Eigen::Index i = 0; i < eta.pairwise_overlaps.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < eta.pairwise_overlaps.cols(); ++j) {
            report.notes.push_back("overlap_" + std::to_string(i) + std::to_string(j) + " = " +
                                   format_double(eta.pairwise_overlaps(i, j)));
        }
    }
    return report;
}

scenarios::ScenarioReport as_report(const relcheck::ViolationReport& violation,
                                    std::string name) {
    scenarios::ScenarioReport report;
    report.name = std::move(name);
    report.notes.push_back("violation_magnitude = " + format_double(violation.magnitude));
    report.notes.push_back(std::string("witness_attached = ") +
                           (violation.witness_state.has_value() ? "1" : "0"));
    return report;
}

scenarios::ScenarioReport as_report(const relcheck::FactorizationResult& factorization,
                                    std::string name) {
    scenarios::ScenarioReport report;
    report.name = std::move(name);
    report.notes.push_back("residual = " + format_double(factorization.residual));
    report.notes.push_back("alignment_phase = " + format_double(factorization.alignment_phase));
    return report;
}

} // namespace qlab::report
