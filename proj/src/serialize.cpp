#include "qlab/serialize.hpp"

#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

std::string entry(cxd z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a,%a", z.real(), z.imag());
    return buf;
}

std::string dims_line(const CompositeSpace& space) {
    std::string line = "dims";
    for (int d : space.dims()) line += " " + std::to_string(d);
    return line;
}

cxd parse_entry(const std::string& tok) {
    const std::size_t comma = tok.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("fixture parse: entry missing comma: " + tok);
    return cxd(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
}

CompositeSpace parse_header(std::istream& in, const std::string& expected_kind) {
    std::string kind;
    in >> kind;
    if (kind != expected_kind)
        throw std::runtime_error("fixture parse: expected kind '" + expected_kind +
                                 "', got '" + kind + "'");
    std::string tag;
    in >> tag;
    if (tag != "dims") throw std::runtime_error("fixture parse: missing dims header");
    std::string rest;
    std::getline(in, rest);
    std::istringstream dims_in(rest);
    std::vector<int> dims;
    int d;
    while (dims_in >> d) dims.push_back(d);
    return CompositeSpace(dims);
}

} // namespace

std::string to_text(const Operator& op) {
    std::string out = "operator\n" + dims_line(op.space()) + "\n";
    for (int i = 0; i < op.dim(); ++i) {
        for (int j = 0; j < op.dim(); ++j) {
            if (j) out += ' ';
            out += entry(op.matrix()(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string to_text(const StateVector& psi) {
    std::string out = "state\n" + dims_line(psi.space()) + "\n";
    for (int i = 0; i < psi.dim(); ++i) {
        if (i) out += ' ';
        out += entry(psi.amplitudes()(i));
    }
    out += '\n';
    return out;
}

Operator operator_from_text(std::istream& in) {
    const CompositeSpace space = parse_header(in, "operator");
    Matrix m(space.total(), space.total());
    for (int i = 0; i < space.total(); ++i)
        for (int j = 0; j < space.total(); ++j) {
            std::string tok;
            if (!(in >> tok)) throw std::runtime_error("fixture parse: truncated operator");
            m(i, j) = parse_entry(tok);
        }
    return Operator(std::move(m), space);
}

StateVector state_from_text(std::istream& in) {
    const CompositeSpace space = parse_header(in, "state");
    Vector v(space.total());
    for (int i = 0; i < space.total(); ++i) {
        std::string tok;
        if (!(in >> tok)) throw std::runtime_error("fixture parse: truncated state");
        v(i) = parse_entry(tok);
    }
    return StateVector(std::move(v), space);
}

} // namespace qlab
