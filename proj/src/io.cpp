#include "ffskit/io.hpp"

#include <fstream>
#include <sstream>

namespace ffskit {

namespace {

const json& member(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw SchemaError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

const json& array_of(const json& j, const char* what, int size = -1)
{
    if (!j.is_array())
        throw SchemaError(std::string(what) + " must be an array");
    if (size >= 0 && static_cast<int>(j.size()) != size)
        throw SchemaError(std::string(what) + " must have " + std::to_string(size) + " entries");
    return j;
}

int int_from_json(const json& j, const char* what)
{
    if (!j.is_number_integer())
        throw SchemaError(std::string(what) + " must be an integer");
    return j.get<int>();
}

Integer integer_from_json(const json& j)
{
    const auto q = rational_from_json(j);
    if (q.get_den() != 1)
        throw SchemaError("expected an integer, got " + to_string(q));
    return q.get_num();
}

long double real_from_json(const json& j)
{
    if (j.is_number())
        return j.get<long double>();
    if (j.is_string()) {
        try {
            return std::stold(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw SchemaError("expected a real number");
}

std::vector<MatF> matrices_from_json(const NumberField& f, const json& j, int dim)
{
    std::vector<MatF> out;
    for (const auto& g : array_of(j, "generators"))
        out.push_back(matrix_from_json(f, g, dim, dim));
    return out;
}

Neatness neatness_from_json(const json& j)
{
    if (!j.contains("neatness"))
        return Neatness::enforce;
    const auto& v = j.at("neatness");
    if (v == "enforce")
        return Neatness::enforce;
    if (v == "relaxed")
        return Neatness::relaxed;
    throw SchemaError("neatness must be \"enforce\" or \"relaxed\"");
}

Frame frame_from_json(const QuadSpace& v, const json& j, int n)
{
    Frame x;
    for (const auto& e : array_of(j, "frame", n))
        x.push_back(vec_from_json(v.field(), e, v.dim()));
    return x;
}

}  // namespace

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
}

Rational rational_from_json(const json& j)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        throw SchemaError("expected a rational string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
        throw SchemaError("'" + j.get<std::string>() + "' is not a rational");
    }
}

json rational_to_json(const Rational& q)
{
    return to_string(q);
}

NumberField field_from_json(const json& j)
{
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "Q")
            return NumberField::rationals();
        if (name == "Q(sqrt5)")
            return NumberField::golden();
        throw SchemaError("unknown field name '" + name + "'");
    }
    std::vector<Integer> poly;
    for (const auto& c : array_of(member(j, "min_poly"), "min_poly"))
        poly.push_back(integer_from_json(c));
    if (poly.size() < 2)
        throw SchemaError("min_poly needs degree at least 1");
    const int d = static_cast<int>(poly.size()) - 1;
    std::vector<std::vector<Rational>> basis;
    if (j.contains("integral_basis")) {
        for (const auto& row : array_of(j.at("integral_basis"), "integral_basis", d)) {
            std::vector<Rational> r;
            for (const auto& c : array_of(row, "integral_basis row", d))
                r.push_back(rational_from_json(c));
            basis.push_back(std::move(r));
        }
    } else {
        for (int i = 0; i < d; ++i) {
            std::vector<Rational> r(static_cast<std::size_t>(d), Rational(0));
            r[static_cast<std::size_t>(i)] = 1;
            basis.push_back(std::move(r));
        }
    }
    std::vector<Interval> isolators;
    if (j.contains("isolators"))
        for (const auto& iv : array_of(j.at("isolators"), "isolators", d)) {
            array_of(iv, "isolator", 2);
            isolators.emplace_back(rational_from_json(iv[0]), rational_from_json(iv[1]));
        }
    return NumberField::create(std::move(poly), std::move(basis), std::move(isolators));
}

json field_to_json(const NumberField& f)
{
    json j;
    j["min_poly"] = json::array();
    for (const auto& c : f.min_poly_coeffs())
        j["min_poly"].push_back(to_string(c));
    j["integral_basis"] = json::array();
    for (const auto& row : f.integral_basis()) {
        json r = json::array();
        for (const auto& c : row)
            r.push_back(rational_to_json(c));
        j["integral_basis"].push_back(r);
    }
    j["isolators"] = json::array();
    for (const auto& iv : f.isolators())
        j["isolators"].push_back(json::array({rational_to_json(iv.lo), rational_to_json(iv.hi)}));
    return j;
}

FieldElem elem_from_json(const NumberField& f, const json& j)
{
    if (!j.is_array())
        return f.from_rational(rational_from_json(j));
    std::vector<Rational> c;
    for (const auto& x : array_of(j, "field element", f.degree()))
        c.push_back(rational_from_json(x));
    return f.from_coords(std::move(c));
}

json elem_to_json(const FieldElem& x)
{
    json j = json::array();
    for (const auto& c : x.coords())
        j.push_back(rational_to_json(c));
    return j;
}

FVec vec_from_json(const NumberField& f, const json& j, int dim)
{
    FVec v;
    for (const auto& e : array_of(j, "vector", dim))
        v.push_back(elem_from_json(f, e));
    return v;
}

json vec_to_json(const FVec& v)
{
    json j = json::array();
    for (const auto& x : v)
        j.push_back(elem_to_json(x));
    return j;
}

MatF matrix_from_json(const NumberField& f, const json& j, int rows, int cols)
{
    array_of(j, "matrix", rows);
    const auto r = j.size();
    if (r == 0)
        return MatF(0, 0, f.zero());
    const auto c = array_of(j[0], "matrix row", cols).size();
    MatF m(r, c, f.zero());
    for (std::size_t i = 0; i < r; ++i) {
        array_of(j[i], "matrix row", static_cast<int>(c));
        for (std::size_t k = 0; k < c; ++k)
            m(i, k) = elem_from_json(f, j[i][k]);
    }
    return m;
}

json matrix_to_json(const MatF& m)
{
    json j = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k)
            row.push_back(elem_to_json(m(i, k)));
        j.push_back(row);
    }
    return j;
}

SymMatF sym_from_json(const NumberField& f, const json& j, int n)
{
    auto m = matrix_from_json(f, j, n, n);
    if (m.rows() != m.cols() || m.rows() == 0)
        throw SchemaError("symmetric matrix must be square and nonempty");
    return SymMatF(std::move(m));
}

json sym_to_json(const SymMatF& t)
{
    return matrix_to_json(t.mat());
}

QuadLattice lattice_from_json(const json& j)
{
    const auto f = field_from_json(member(j, "field"));
    const auto& g = member(j, "gram");
    const auto m = matrix_from_json(f, g, -1, static_cast<int>(g.size()));
    return QuadLattice(f, m);
}

Coset coset_from_json(const QuadLattice& l, const json& j, int n)
{
    Coset mu;
    for (const auto& v : array_of(j, "coset", n))
        mu.push_back(vec_from_json(l.field(), v, l.rank()));
    validate_coset(l, mu);
    return mu;
}

TauPoint tau_from_json(const json& j)
{
    TauPoint tau;
    for (const auto& m : array_of(member(j, "tau"), "tau")) {
        const int n = static_cast<int>(array_of(m, "tau matrix").size());
        CMatrix c;
        for (const auto& row : m) {
            std::vector<Complex> r;
            for (const auto& z : array_of(row, "tau row", n)) {
                array_of(z, "complex entry", 2);
                r.emplace_back(real_from_json(z[0]), real_from_json(z[1]));
            }
            c.push_back(std::move(r));
        }
        tau.tau.push_back(std::move(c));
    }
    if (tau.tau.empty() || tau.tau.front().empty())
        throw SchemaError("tau must contain at least one nonempty matrix");
    return tau;
}

json coeff_to_json(const Rational& q)
{
    return rational_to_json(q);
}

json coeff_to_json(const GaussianRational& z)
{
    return json{{"re", rational_to_json(z.re)}, {"im", rational_to_json(z.im)}};
}

Rational coeff_from_json(const json& j, const RationalRing&)
{
    return rational_from_json(j);
}

GaussianRational coeff_from_json(const json& j, const GaussianRing&)
{
    return {rational_from_json(member(j, "re")), rational_from_json(member(j, "im"))};
}

json series_header(const ConeLattice& cl, const Rational& bound, const std::string& ring,
                   const std::optional<GrowthModel>& growth)
{
    json h;
    h["format"] = "ffskit-series";
    h["field"] = field_to_json(cl.field());
    h["n"] = cl.n();
    h["nu"] = cl.nu();
    h["height_bound"] = rational_to_json(bound);
    h["ring"] = ring;
    if (growth)
        h["growth"] = json{{"C", rational_to_json(growth->c)}, {"p", rational_to_json(growth->p)}};
    else
        h["growth"] = nullptr;
    return h;
}

SeriesHeader parse_series_header(const json& j)
{
    if (!j.is_object() || j.value("format", "") != "ffskit-series")
        throw SchemaError("not an ffskit series header");
    const auto f = field_from_json(member(j, "field"));
    const int n = int_from_json(member(j, "n"), "n");
    const int nu = int_from_json(member(j, "nu"), "nu");
    if (n < 1 || nu < 1)
        throw SchemaError("n and nu must be positive");
    const auto& ring = member(j, "ring");
    if (!ring.is_string())
        throw SchemaError("ring must be a string");
    std::optional<GrowthModel> growth;
    if (j.contains("growth") && !j.at("growth").is_null())
        growth = GrowthModel{rational_from_json(member(j.at("growth"), "C")),
                             rational_from_json(member(j.at("growth"), "p"))};
    return SeriesHeader{ConeLattice(f, n, nu), rational_from_json(member(j, "height_bound")),
                        ring.get<std::string>(), growth};
}

std::string series_ring_of_file(const std::string& path)
{
    std::ifstream in(path);
    std::string line;
    if (!in || !std::getline(in, line))
        throw SchemaError("cannot read series file '" + path + "'");
    const auto j = parse_json(line);
    if (!j.is_object() || !j.contains("ring") || !j.at("ring").is_string())
        throw SchemaError("series header has no ring tag");
    return j.at("ring").get<std::string>();
}

QuadSpace space_from_json(const json& j)
{
    const auto f = field_from_json(member(j, "field"));
    const auto& g = member(j, "gram");
    const auto m = matrix_from_json(f, g, -1, static_cast<int>(g.size()));
    const int d_plus = j.contains("d_plus") ? int_from_json(j.at("d_plus"), "d_plus") : 1;
    return QuadSpace(f, m, d_plus);
}

OrbitDatum datum_from_json(const json& j)
{
    auto v = space_from_json(j);
    const auto policy = neatness_from_json(j);
    if (!j.contains("components")) {
        const auto gens = j.contains("generators") ? matrices_from_json(v.field(), j.at("generators"), v.dim())
                                                   : std::vector<MatF>{};
        return OrbitDatum(std::move(v), gens, policy);
    }
    std::vector<Component> comps;
    for (const auto& c : array_of(j.at("components"), "components")) {
        const auto& label = member(c, "label");
        if (!label.is_string())
            throw SchemaError("component label must be a string");
        const auto gens = c.contains("generators") ? matrices_from_json(v.field(), c.at("generators"), v.dim())
                                                   : std::vector<MatF>{};
        comps.push_back(Component{label.get<std::string>(), FiniteGroup::generate(v, gens)});
    }
    if (comps.empty())
        throw SchemaError("components must not be empty");
    return OrbitDatum(std::move(v), std::move(comps), policy);
}

WeightFunction weight_from_json(const QuadSpace& v, const json& j)
{
    const int n = int_from_json(member(j, "n"), "n");
    if (n < 1)
        throw SchemaError("weight genus must be positive");
    WeightFunction w(n);
    for (const auto& e : array_of(member(j, "support"), "support")) {
        const auto x = frame_from_json(v, member(e, "x"), n);
        if (sgn(w(x)) != 0)
            throw SchemaError("weight support lists a frame twice");
        w.set(x, rational_from_json(member(e, "w")));
    }
    return w;
}

json weight_to_json(const WeightFunction& w)
{
    json j;
    j["n"] = w.n();
    j["support"] = json::array();
    for (const auto& [x, c] : w.support()) {
        json frame = json::array();
        for (const auto& v : x)
            frame.push_back(vec_to_json(v));
        j["support"].push_back(json{{"x", frame}, {"w", rational_to_json(c)}});
    }
    return j;
}

json subspace_to_json(const Subspace& w)
{
    json j = json::array();
    for (const auto& b : w.basis)
        j.push_back(vec_to_json(b));
    return j;
}

json class_to_json(const OrbitDatum& od, const CycleClass& c)
{
    json j = json::array();
    for (const auto& [s, coeff] : c.terms())
        j.push_back(json{{"component", od.components().at(static_cast<std::size_t>(s.component)).label},
                         {"W", subspace_to_json(s.w)},
                         {"k", s.k},
                         {"coeff", rational_to_json(coeff)}});
    return j;
}

SurrogateDatum surrogate_from_json(const json& datum, const json& data)
{
    auto v = space_from_json(datum);
    const auto& f = v.field();
    auto gens = [&](const char* key) {
        return datum.contains(key) ? matrices_from_json(f, datum.at(key), v.dim()) : std::vector<MatF>{};
    };
    const auto ambient = gens("ambient");
    const auto plus = gens("plus");
    const auto level = gens("level");
    std::optional<std::vector<MatF>> stabilizer;
    if (datum.contains("stabilizer"))
        stabilizer = gens("stabilizer");
    const auto weight = weight_from_json(v, member(data, "weight"));
    const auto base = frame_from_json(v, member(data, "base"), weight.n());
    return SurrogateDatum(std::move(v), ambient, plus, level, base, weight, stabilizer, neatness_from_json(datum));
}

}  // namespace ffskit
