#include "feynmat/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "feynmat/integrand.hpp"
#include "json.hpp"

namespace feynmat::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
    std::string input;
    std::string format = "text";
    std::string field = "Q";
    bool first = false, second = false;
    std::string method = "base";
    std::vector<std::string> pairs, flip, legs, momenta;
    bool externals = false;
};

// A graph document, a matroid record or a bare matrix literal.
struct Input {
    std::optional<FeynGraph> graph;
    std::optional<RepresentedMatroid> matroid;
    std::optional<CircuitSystem> circuits;  // supplied with a matroid record
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Input load(const Options& o) {
    const std::string text = slurp(o.input);
    const auto start = text.find_first_not_of(" \t\r\n");
    Input in;
    const Field field = parse_field(o.field);
    if (start != std::string::npos && text[start] == '{') {
        in.graph = parse_graph_json(text);
        const auto m = cycle_matroid(*in.graph);
        in.matroid = RepresentedMatroid::from_matrix(m.matrix(), field);
    } else if (text.compare(start == std::string::npos ? 0 : start, 5, "field") == 0) {
        auto rec = parse_matroid_record(text);
        in.matroid = RepresentedMatroid::from_matrix(rec.matroid.matrix(), field);
        in.circuits = rec.circuits;
    } else {
        in.matroid = RepresentedMatroid::from_matrix(parse_matrix_literal(text), field);
    }
    return in;
}

const FeynGraph& need_graph(const Input& in, const std::string& what) {
    if (!in.graph) throw SchemaError(what + " needs a graph document as input");
    return *in.graph;
}

std::vector<DotPair> parse_pairs(const std::vector<std::string>& raw) {
    std::vector<DotPair> out;
    for (const auto& p : raw) out.push_back(DotPair::parse(p));
    return out;
}

ordered_json matrix_json(const RationalMatrix& m) {
    ordered_json j;
    j["labels"] = m.labels();
    j["rows"] = ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(to_string(m.values()(i, c)));
        j["rows"].push_back(row);
    }
    return j;
}

std::string matrix_text(const RationalMatrix& m) {
    std::ostringstream os;
    write_matrix_literal(os, m);
    return os.str();
}

std::vector<std::vector<std::string>> sorted_circuits(const CircuitSystem& c) {
    std::vector<ElementSet> sets = c.circuits();
    std::sort(sets.begin(), sets.end(), ElementSetOrder{});
    std::vector<std::vector<std::string>> out;
    for (auto s : sets) out.push_back(c.labels_of(s));
    return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

ordered_json polynomial_json(const Polynomial& p, const std::vector<std::string>& names) {
    ordered_json j;
    j["variables"] = names;
    j["terms"] = term_lines(p, names);
    j["polynomial"] = to_string(p, names);
    return j;
}

// ---------------------------------------------------------------------------

void circuits_cmd(const Options& o, std::ostream& out) {
    const auto in = load(o);
    const auto c = circuits_of(*in.matroid);
    if (in.circuits && in.circuits->label_sets() != c.label_sets())
        throw IntegrityError("the circuits listed in the record differ from those of its matrix");
    const auto list = sorted_circuits(c);
    if (o.format == "json") {
        ordered_json j;
        j["field"] = to_string(in.matroid->field());
        j["ground"] = c.ground();
        j["circuits"] = list;
        out << j.dump(2) << "\n";
        return;
    }
    for (const auto& s : list) out << join(s) << "\n";
}

void dual_cmd(const Options& o, std::ostream& out) {
    const auto in = load(o);
    const auto d = dual(standardize(*in.matroid));
    if (o.format == "json") {
        ordered_json j;
        j["field"] = to_string(d.field());
        j["matrix"] = matrix_json(d.matrix());
        out << j.dump(2) << "\n";
        return;
    }
    out << matrix_text(d.matrix());
}

void check_cmd(const Options& o, std::ostream& out) {
    const auto in = load(o);
    const auto& m = *in.matroid;
    const auto loose = coloops(m);
    const auto tu = is_totally_unimodular(m.matrix().values());
    const bool regular = is_regular_by_binary_test(RepresentedMatroid(m.matrix(), Field::Q));
    if (o.format == "json") {
        ordered_json j;
        j["1pi"] = loose.empty();
        j["coloops"] = loose;
        j["totally_unimodular"] = tu.unimodular;
        if (!tu.unimodular) {
            std::vector<std::string> cols;
            for (auto c : tu.cols) cols.push_back(m.labels()[c]);
            j["witness"] = {{"rows", tu.rows}, {"columns", cols}, {"det", to_string(tu.det)}};
        }
        j["regular"] = regular;
        out << j.dump(2) << "\n";
        return;
    }
    out << "1PI: " << (loose.empty() ? "true" : "false") << "\n";
    if (!loose.empty()) out << "coloops: " << join(loose) << "\n";
    out << "totally unimodular: " << (tu.unimodular ? "true" : "false") << "\n";
    if (!tu.unimodular) {
        std::vector<std::string> cols;
        for (auto c : tu.cols) cols.push_back(m.labels()[c]);
        std::vector<std::string> rows;
        for (auto r : tu.rows) rows.push_back(std::to_string(r + 1));
        out << "witness: rows " << join(rows, ",") << " columns " << join(cols, ",") << " det " << to_string(tu.det)
            << "\n";
    }
    out << "regular: " << (regular ? "true" : "false") << "\n";
}

void symanzik_cmd(const Options& o, std::ostream& out) {
    if (o.first == o.second) throw SchemaError("choose exactly one of --first and --second");
    const auto in = load(o);
    Polynomial p;
    std::vector<std::string> names;
    if (o.first) {
        const auto& m = *in.matroid;
        if (o.method == "base")
            p = psi_base_expansion(m);
        else if (o.method == "block")
            p = psi_block_det(m);
        else if (o.method == "gram")
            p = psi_circuit_gram(m);
        else if (o.method == "tree")
            p = psi_tree_oracle(need_graph(in, "--method tree"));
        else
            throw SchemaError("unknown method '" + o.method + "'");
        names = m.labels();
    } else {
        SecondSymanzik s;
        if (in.graph) {
            s = o.method == "forest" ? phi_2forest_oracle(*in.graph) : phi_second(*in.graph);
        } else {
            if (o.legs.empty() || o.legs.size() != o.momenta.size())
                throw SchemaError("a matrix input needs --legs and one --momenta entry per leg");
            std::vector<MomentumExpr> q;
            for (const auto& x : o.momenta) q.push_back(MomentumExpr::parse(x));
            s = phi_second(*in.matroid, o.legs, q);
        }
        p = s.poly;
        names = s.names;
    }
    if (o.format == "json")
        out << polynomial_json(p, names).dump(2) << "\n";
    else
        out << to_string(p, names) << "\n";
}

ReduceOptions reduce_options(const Options& o, bool externals) {
    ReduceOptions r;
    r.externals = externals;
    r.flip = parse_pairs(o.flip);
    return r;
}

void reduce_cmd(const Options& o, std::ostream& out) {
    const auto in = load(o);
    const auto& g = need_graph(in, "reduce");
    const auto pairs = parse_pairs(o.pairs);
    const auto s = scalarize(g, pairs, reduce_options(o, o.externals));
    const auto& f = s.form;
    std::vector<std::string> pair_text, terms;
    for (const auto& p : pairs) pair_text.push_back(to_string(p));
    for (const auto& t : s.terms) terms.push_back(to_string(t));
    const auto circuits = sorted_circuits(f.circuits);

    if (o.format == "json") {
        ordered_json j;
        j["input"] = o.input;
        j["pairs"] = pair_text;
        j["new_elements"] = ordered_json::array();
        for (const auto& n : f.new_elements)
            j["new_elements"].push_back({{"id", n.id},
                                         {"pair", to_string(n.source)},
                                         {"construction", n.construction},
                                         {"alpha", to_string(n.alpha)},
                                         {"beta", to_string(n.beta)},
                                         {"momentum", to_string(n.momentum)}});
        j["discarded"] = ordered_json::array();
        for (const auto& d : f.discarded)
            j["discarded"].push_back({{"pair", to_string(d.pair)},
                                      {"witness", d.witness.element},
                                      {"alpha", to_string(d.witness.alpha)},
                                      {"beta", to_string(d.witness.beta)}});
        j["matrix"] = matrix_json(f.matrix());
        ordered_json momenta = ordered_json::object();
        for (const auto& e : f.internal_elements()) momenta[e] = to_string(f.momenta.at(e));
        j["momenta"] = momenta;
        j["circuits"] = circuits;
        j["scalar_terms"] = terms;
        out << j.dump(2) << "\n";
        return;
    }
    out << "input: " << o.input << "\n";
    out << "pairs: " << (pair_text.empty() ? "-" : join(pair_text)) << "\n";
    out << "new elements:\n";
    for (const auto& n : f.new_elements)
        out << "  " << n.id << " from " << to_string(n.source) << " (construction " << n.construction
            << "): " << to_string(n.momentum) << "\n";
    out << "discarded:\n";
    for (const auto& d : f.discarded)
        out << "  " << to_string(d.pair) << " via " << d.witness.element << " (alpha " << to_string(d.witness.alpha)
            << ", beta " << to_string(d.witness.beta) << ")\n";
    out << "matrix:\n" << matrix_text(f.matrix());
    out << "momenta:\n";
    for (const auto& e : f.internal_elements()) out << "  " << e << ": " << to_string(f.momenta.at(e)) << "\n";
    out << "circuits:\n";
    for (const auto& c : circuits) out << "  " << join(c) << "\n";
    out << "scalar terms:\n";
    for (const auto& t : terms) out << "  " << t << "\n";
}

void integrand_cmd(const Options& o, std::ostream& out) {
    const auto in = load(o);
    const auto& g = need_graph(in, "integrand");
    const auto s = scalarize(g, parse_pairs(o.pairs), reduce_options(o, true));
    const auto doc = integrand(g, s.form);
    std::vector<std::string> terms;
    for (const auto& t : s.terms) terms.push_back(to_string(t));
    if (o.format == "json") {
        ordered_json j;
        j["scalar_terms"] = terms;
        j["integrand"] = ordered_json::parse(integrand_json(doc));
        out << j.dump(2) << "\n";
        return;
    }
    out << "scalar terms:\n";
    for (const auto& t : terms) out << "  " << t << "\n";
    out << integrand_text(doc);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Feynman matroids: circuits, Symanzik polynomials and tensor reduction"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("input", o.input, "graph JSON, matroid record or matrix literal")->required();
        sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--field", o.field, "Q, F2 or F3")->check(CLI::IsMember({"Q", "F2", "F3"}));
    };
    auto* circuits = app.add_subcommand("circuits", "print the circuits");
    auto* dual_sub = app.add_subcommand("dual", "print a representation of the dual");
    auto* check = app.add_subcommand("check", "1PI, total unimodularity and regularity");
    auto* symanzik = app.add_subcommand("symanzik", "first or second Symanzik polynomial");
    auto* reduce = app.add_subcommand("reduce", "coextend along dot products and scalarize");
    auto* integ = app.add_subcommand("integrand", "momentum-space and parametric integrand");
    for (auto* s : {circuits, dual_sub, check, symanzik, reduce, integ}) common(s);

    symanzik->add_flag("--first", o.first, "first polynomial");
    symanzik->add_flag("--second", o.second, "second polynomial");
    symanzik->add_option("--method", o.method, "first: base, block, gram, tree; second: base, forest");
    symanzik->add_option("--legs", o.legs, "external columns of a matrix input")->delimiter(',');
    symanzik->add_option("--momenta", o.momenta, "momentum per leg, e.g. q1,-q1")->delimiter(',');
    for (auto* s : {reduce, integ}) {
        s->add_option("--pairs", o.pairs, "dot products as e1:e2, comma separated")->delimiter(',');
        s->add_option("--flip", o.flip, "pairs whose free sign is flipped")->delimiter(',');
    }
    reduce->add_flag("--externals", o.externals, "carry the external legs as columns");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        std::ostringstream buf;
        if (circuits->parsed()) circuits_cmd(o, buf);
        if (dual_sub->parsed()) dual_cmd(o, buf);
        if (check->parsed()) check_cmd(o, buf);
        if (symanzik->parsed()) symanzik_cmd(o, buf);
        if (reduce->parsed()) reduce_cmd(o, buf);
        if (integ->parsed()) integrand_cmd(o, buf);
        out << buf.str();
        return 0;
    } catch (const IntegrityError& e) {
        err << "integrity error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace feynmat::cli
