#include "ffskit/hodgebound.hpp"
#include "ffskit/io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace ffskit;

namespace {

enum Exit { ok = 0, check_failed = 1, schema = 2, validation = 3, internal = 4 };

struct Output {
    std::string path;

    void write(const std::string& text) const
    {
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw SchemaError("cannot write '" + path + "'");
        out << text;
    }
};

Rational parse_bound(const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw SchemaError("'" + text + "' is not a rational height bound");
    }
}

json read_json_argument(const std::string& text)
{
    if (!text.empty() && (text.front() == '[' || text.front() == '{' || text.front() == '"'))
        return parse_json(text);
    return read_json_file(text);
}

NumberField field_argument(const std::string& text)
{
    if (text == "Q" || text == "Q(sqrt5)")
        return field_from_json(json(text));
    return field_from_json(read_json_argument(text));
}

std::string decimal(long double x)
{
    std::ostringstream s;
    s << std::setprecision(LDBL_DIG + 3) << x;
    return s.str();
}

std::string bound_string(long double x)
{
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << x;
    return s.str();
}

json symbol_to_json(const OrbitDatum& od, const Symbol& s)
{
    return json{{"component", od.components().at(static_cast<std::size_t>(s.component)).label},
                {"W", subspace_to_json(s.w)},
                {"k", s.k}};
}

json class_diff(const OrbitDatum& od, const CycleClass& lhs, const CycleClass& rhs)
{
    json out = json::array();
    auto entry = [&](const Symbol& s, const Rational& a, const Rational& b) {
        auto j = symbol_to_json(od, s);
        j["lhs"] = rational_to_json(a);
        j["rhs"] = rational_to_json(b);
        out.push_back(j);
    };
    for (const auto& [s, a] : lhs.terms()) {
        const auto b = rhs.coeff(s);
        if (a != b)
            entry(s, a, b);
    }
    for (const auto& [s, b] : rhs.terms())
        if (sgn(lhs.coeff(s)) == 0)
            entry(s, Rational(0), b);
    return out;
}

json check_report(const std::string& check, const OrbitDatum& od, const CycleClass& lhs, const CycleClass& rhs,
                  bool equal)
{
    return json{{"check", check},
                {"equal", equal},
                {"lhs", class_to_json(od, lhs)},
                {"rhs", class_to_json(od, rhs)},
                {"diff", class_diff(od, lhs, rhs)}};
}

json block_to_json(const OrbitDatum& od, const BlockSeries<CycleRing>& s)
{
    json out = json::array();
    for (const auto& [k, v] : s.coeffs)
        out.push_back(json{{"T1", sym_to_json(s.cone1.matrix(k.first))},
                           {"T2", sym_to_json(s.cone2.matrix(k.second))},
                           {"coeff", class_to_json(od, v)}});
    return out;
}

json block_diff(const OrbitDatum& od, const BlockSeries<CycleRing>& lhs, const BlockSeries<CycleRing>& rhs)
{
    json out = json::array();
    auto at = [](const BlockSeries<CycleRing>& s, const std::pair<ConeKey, ConeKey>& k) {
        const auto it = s.coeffs.find(k);
        return it == s.coeffs.end() ? CycleClass{} : it->second;
    };
    std::set<std::pair<ConeKey, ConeKey>> keys;
    for (const auto& [k, v] : lhs.coeffs)
        keys.insert(k);
    for (const auto& [k, v] : rhs.coeffs)
        keys.insert(k);
    for (const auto& k : keys) {
        const auto a = at(lhs, k);
        const auto b = at(rhs, k);
        if (a == b)
            continue;
        out.push_back(json{{"T1", sym_to_json(lhs.cone1.matrix(k.first))},
                           {"T2", sym_to_json(lhs.cone2.matrix(k.second))},
                           {"terms", class_diff(od, a, b)}});
    }
    return out;
}

int verify_product(const json& datum, const json& data, json& report)
{
    const auto od = datum_from_json(datum);
    const auto& f = od.space().field();
    const auto phi1 = weight_from_json(od.space(), data.at("phi1"));
    const auto phi2 = weight_from_json(od.space(), data.at("phi2"));
    const auto t1 = sym_from_json(f, data.at("T1"), phi1.n());
    const auto t2 = sym_from_json(f, data.at("T2"), phi2.n());
    std::optional<WeightFunction> joint;
    if (data.contains("joint"))
        joint = weight_from_json(od.space(), data.at("joint"));
    const auto r = check_product_formula(od, t1, phi1, t2, phi2, joint ? &*joint : nullptr);
    report = check_report("product", od, r.lhs, r.rhs, r.equal());
    return r.equal() ? ok : check_failed;
}

int verify_pullback(const json& datum, const json& data, json& report)
{
    const auto od = datum_from_json(datum);
    const auto& v = od.space();
    std::vector<FVec> u0;
    for (const auto& x : data.at("u0"))
        u0.push_back(vec_from_json(v.field(), x, v.dim()));
    const ComplementDatum cd(od, u0);
    SplitWeight phi;
    for (const auto& p : data.at("parts"))
        phi.parts.emplace_back(weight_from_json(v, p.at("phi0")), weight_from_json(v, p.at("phi1")));
    if (phi.parts.empty())
        throw SchemaError("pullback data needs at least one part");
    const auto t = sym_from_json(v.field(), data.at("T"), phi.parts.front().first.n());
    std::optional<WeightFunction> full;
    if (data.contains("full"))
        full = weight_from_json(v, data.at("full"));
    const auto r = check_pullback_factorization(od, cd, t, phi, full ? &*full : nullptr);
    report = check_report("pullback", cd.datum(), r.lhs, r.rhs, r.equal());
    return r.equal() ? ok : check_failed;
}

int verify_natural(const json& datum, const json& data, json& report)
{
    const auto s = surrogate_from_json(datum, data);
    const auto r = check_natural_vs_weighted(s);
    report = check_report("natural", *r.datum, r.weighted, r.natural, r.equal());
    report["bijective"] = r.bijective();
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back(json{{"r", c.r},
                             {"eps", c.eps},
                             {"component", c.component},
                             {"orbits", c.orbits},
                             {"double_cosets", c.double_cosets},
                             {"bijective", c.bijective}});
    report["cells"] = cells;
    return r.equal() ? ok : check_failed;
}

int verify_series_product(const json& datum, const json& data, json& report)
{
    const auto od = std::make_shared<const OrbitDatum>(datum_from_json(datum));
    const auto phi1 = weight_from_json(od->space(), data.at("phi1"));
    const auto phi2 = weight_from_json(od->space(), data.at("phi2"));
    const auto b = rational_from_json(data.at("bound"));
    const auto r = check_series_product(od, phi1, phi2, b);
    report = json{{"check", "series-product"},
                  {"equal", r.equal()},
                  {"lhs", block_to_json(*od, r.lhs)},
                  {"rhs", block_to_json(*od, r.rhs)},
                  {"diff", block_diff(*od, r.lhs, r.rhs)}};
    return r.equal() ? ok : check_failed;
}

template <class Ring>
std::string multiply_files(const std::string& a, const std::string& b)
{
    const auto fa = read_series_file<Ring>(a);
    const auto fb = read_series_file<Ring>(b);
    std::ostringstream out;
    write_series(out, fa * fb);
    return out.str();
}

int run(int argc, char** argv)
{
    CLI::App app{"Exact formal Fourier series, theta series and special cycle calculus"};
    app.require_subcommand(1);
    app.fallthrough();
    int jobs = 1;
    app.add_option("--jobs", jobs, "Worker threads for lattice enumeration")->check(CLI::PositiveNumber);
    Output output;
    app.add_option("-o,--output", output.path, "Output file (default stdout)");

    auto* cone = app.add_subcommand("cone-enum", "List cone points up to a height bound as JSON-lines");
    std::string field_arg;
    int n = 1;
    int nu = 1;
    std::string bound_arg;
    cone->add_option("--field", field_arg, "Field descriptor file, JSON text, or Q / Q(sqrt5)")->required();
    cone->add_option("-n,--genus", n)->check(CLI::PositiveNumber);
    cone->add_option("--nu", nu)->check(CLI::PositiveNumber);
    cone->add_option("-B,--bound", bound_arg)->required();

    auto* theta = app.add_subcommand("theta", "Theta series of a lattice coset");
    std::string lattice_arg;
    std::string coset_arg;
    std::optional<int> theta_nu;
    theta->add_option("--lattice", lattice_arg)->required();
    theta->add_option("-n,--genus", n)->check(CLI::PositiveNumber);
    theta->add_option("--coset", coset_arg, "Array of n vectors in the dual lattice");
    theta->add_option("--nu", theta_nu)->check(CLI::PositiveNumber);
    theta->add_option("-B,--bound", bound_arg)->required();

    auto* multiply = app.add_subcommand("multiply", "Product of two series files");
    std::string series_a;
    std::string series_b;
    multiply->add_option("a", series_a)->required();
    multiply->add_option("b", series_b)->required();

    auto* eval = app.add_subcommand("eval", "Numeric value of a rational series at tau with error bounds");
    std::string series_arg;
    std::string tau_arg;
    std::optional<int> precision;
    eval->add_option("series", series_arg)->required();
    eval->add_option("--tau", tau_arg)->required();
    eval->add_option("--precision", precision, "Decimal digits (overrides FFSKIT_PRECISION)")
        ->check(CLI::PositiveNumber);

    auto* lam = app.add_subcommand("lambda", "lambda of a cone point, or the table up to a bound");
    std::string t_arg;
    lam->add_option("--field", field_arg)->required();
    lam->add_option("-n,--genus", n)->check(CLI::PositiveNumber);
    lam->add_option("--nu", nu)->check(CLI::PositiveNumber);
    auto* lam_t = lam->add_option("-T,--matrix", t_arg, "Symmetric matrix as JSON");
    auto* lam_b = lam->add_option("-B,--bound", bound_arg);
    lam_t->excludes(lam_b);

    auto* verify = app.add_subcommand("verify", "Check a cycle identity and print a report");
    std::string check;
    std::string datum_arg;
    std::string data_arg;
    verify->add_option("--check", check)
        ->required()
        ->check(CLI::IsMember({"product", "pullback", "natural", "series-product"}));
    verify->add_option("--datum", datum_arg)->required();
    verify->add_option("--data", data_arg)->required();

    auto* hodge = app.add_subcommand("hodge", "Hodge vanishing and modularity bounds");
    int m_first = 1;
    int m_last = 12;
    int d_plus = 1;
    std::optional<int> genus;
    std::string format = "csv";
    hodge->add_option("--m-first", m_first)->check(CLI::PositiveNumber);
    hodge->add_option("--m-last", m_last)->check(CLI::PositiveNumber);
    hodge->add_option("--d-plus", d_plus)->check(CLI::PositiveNumber);
    hodge->add_option("-n,--genus", genus, "Genus for the ell columns (default: first genus out of range)")
        ->check(CLI::PositiveNumber);
    hodge->add_option("--format", format)->check(CLI::IsMember({"csv", "markdown"}));

    auto* disc = app.add_subcommand("discgroup", "Discriminant group of a lattice");
    disc->add_option("--lattice", lattice_arg)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return schema;
    }

    if (cone->parsed()) {
        const ConeLattice cl(field_argument(field_arg), n, nu);
        std::ostringstream out;
        for (const auto& k : cl.enumerate(parse_bound(bound_arg), jobs))
            out << json{{"T", sym_to_json(cl.matrix(k))}, {"height", rational_to_json(cl.height(k))}}.dump() << '\n';
        output.write(out.str());
        return ok;
    }
    if (theta->parsed()) {
        const auto l = lattice_from_json(read_json_argument(lattice_arg));
        const auto mu = coset_arg.empty() ? zero_coset(l, n) : coset_from_json(l, read_json_argument(coset_arg), n);
        std::ostringstream out;
        write_series(out, theta_expansion(l, mu, parse_bound(bound_arg), theta_nu, jobs));
        output.write(out.str());
        return ok;
    }
    if (multiply->parsed()) {
        const auto ring = series_ring_of_file(series_a);
        if (ring != series_ring_of_file(series_b))
            throw SchemaError("series files have different coefficient rings");
        if (ring == RationalRing::tag())
            output.write(multiply_files<RationalRing>(series_a, series_b));
        else if (ring == GaussianRing::tag())
            output.write(multiply_files<GaussianRing>(series_a, series_b));
        else
            throw SchemaError("unsupported coefficient ring '" + ring + "'");
        return ok;
    }
    if (eval->parsed()) {
        if (precision)
            setenv("FFSKIT_PRECISION", std::to_string(*precision).c_str(), 1);
        const auto f = read_series_file<RationalRing>(series_arg);
        const auto tau = tau_from_json(read_json_argument(tau_arg));
        const auto v = numeric_eval(f, tau);
        const json out = {{"re", decimal(v.value.real())},
                          {"im", decimal(v.value.imag())},
                          {"tail_bound", bound_string(v.tail_bound)},
                          {"rounding_bound", bound_string(v.rounding_bound)},
                          {"error_bound", bound_string(v.tail_bound + v.rounding_bound)}};
        output.write(out.dump() + "\n");
        return ok;
    }
    if (lam->parsed()) {
        if (t_arg.empty() && bound_arg.empty())
            throw SchemaError("lambda needs --matrix or --bound");
        const ConeLattice cl(field_argument(field_arg), n, nu);
        if (!t_arg.empty()) {
            const auto t = sym_from_json(cl.field(), parse_json(t_arg), n);
            output.write(json{{"T", sym_to_json(t)}, {"lambda", lambda(cl, t)}}.dump() + "\n");
            return ok;
        }
        const LambdaTable table(cl, parse_bound(bound_arg), jobs);
        std::ostringstream out;
        for (const auto& k : table.points()) {
            if (k.is_zero())
                continue;
            out << json{{"T", sym_to_json(cl.matrix(k))}, {"lambda", table(k)}}.dump() << '\n';
        }
        output.write(out.str());
        return ok;
    }
    if (verify->parsed()) {
        const auto datum = read_json_argument(datum_arg);
        const auto data = read_json_argument(data_arg);
        json report;
        int code = ok;
        try {
            if (check == "product")
                code = verify_product(datum, data, report);
            else if (check == "pullback")
                code = verify_pullback(datum, data, report);
            else if (check == "natural")
                code = verify_natural(datum, data, report);
            else
                code = verify_series_product(datum, data, report);
        } catch (const json::exception& e) {
            throw SchemaError(std::string("malformed check data: ") + e.what());
        }
        output.write(report.dump(2) + "\n");
        return code;
    }
    if (hodge->parsed()) {
        if (m_last < m_first)
            throw SchemaError("--m-last must not be smaller than --m-first");
        auto rows = hodge_table(m_first, m_last, d_plus);
        if (genus)
            for (auto& r : rows) {
                r.next_n = *genus;
                r.ell = required_ell(*genus, d_plus, r.m);
            }
        output.write(format == "csv" ? format_csv(rows) : format_markdown(rows));
        return ok;
    }
    if (disc->parsed()) {
        const auto g = discriminant_group(lattice_from_json(read_json_argument(lattice_arg)));
        json out;
        out["order"] = to_string(g.order());
        out["invariants"] = json::array();
        for (const auto& d : g.invariants)
            out["invariants"].push_back(to_string(d));
        out["generators"] = json::array();
        for (const auto& v : g.generators)
            out["generators"].push_back(vec_to_json(v));
        out["elements"] = json::array();
        for (const auto& v : g.elements)
            out["elements"].push_back(vec_to_json(v));
        output.write(out.dump() + "\n");
        return ok;
    }
    return internal;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return schema;
    } catch (const NeatnessViolation& e) {
        std::cerr << "neatness violation: " << e.what() << '\n'
                  << "subspace: " << subspace_to_json(e.subspace).dump() << '\n';
        return validation;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return validation;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << '\n';
        return validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return internal;
    }
}
