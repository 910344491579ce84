#pragma once

#include "ffskit/cyclealg.hpp"
#include "ffskit/ffs.hpp"
#include "ffskit/surrogate.hpp"
#include "ffskit/theta.hpp"

#include "json.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace ffskit {

using json = nlohmann::json;

/// Parses a file; unreadable files and malformed JSON raise SchemaError.
json read_json_file(const std::string& path);
json parse_json(const std::string& text);

/// Rationals are written as strings "p/q"; integers and decimal strings are also accepted.
Rational rational_from_json(const json& j);
json rational_to_json(const Rational& q);

/// {"min_poly": [...], "integral_basis": [[...]], "isolators": [[lo, hi]]} or one of the
/// names "Q" and "Q(sqrt5)".
NumberField field_from_json(const json& j);
json field_to_json(const NumberField& f);

/// Integral-basis coordinates as rational strings. A bare scalar is also accepted and read
/// as a rational.
FieldElem elem_from_json(const NumberField& f, const json& j);
json elem_to_json(const FieldElem& x);

FVec vec_from_json(const NumberField& f, const json& j, int dim = -1);
json vec_to_json(const FVec& v);

/// Array of rows.
MatF matrix_from_json(const NumberField& f, const json& j, int rows = -1, int cols = -1);
json matrix_to_json(const MatF& m);
SymMatF sym_from_json(const NumberField& f, const json& j, int n = -1);
json sym_to_json(const SymMatF& t);

/// {"field": ..., "gram": [[...]]}.
QuadLattice lattice_from_json(const json& j);
/// Array of n vectors (the columns of mu).
Coset coset_from_json(const QuadLattice& l, const json& j, int n);

/// {"tau": [M_1, ..., M_d]}, each M_j an n x n array of [re, im] pairs.
TauPoint tau_from_json(const json& j);

json coeff_to_json(const Rational& q);
json coeff_to_json(const GaussianRational& z);
Rational coeff_from_json(const json& j, const RationalRing&);
GaussianRational coeff_from_json(const json& j, const GaussianRing&);

json series_header(const ConeLattice& cl, const Rational& bound, const std::string& ring,
                   const std::optional<GrowthModel>& growth);

/// JSON-lines: a header, then {"T": ..., "coeff": ...} in canonical order.
template <class Ring>
void write_series(std::ostream& out, const FormalSeries<Ring>& f)
{
    out << series_header(f.cone(), f.bound(), Ring::tag(), f.growth()).dump() << '\n';
    for (const auto& [k, v] : f.coeffs()) {
        json line;
        line["T"] = sym_to_json(f.cone().matrix(k));
        line["coeff"] = coeff_to_json(v);
        out << line.dump() << '\n';
    }
}

struct SeriesHeader {
    ConeLattice cone;
    Rational bound;
    std::string ring;
    std::optional<GrowthModel> growth;
};
SeriesHeader parse_series_header(const json& j);

template <class Ring>
FormalSeries<Ring> read_series(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError("series file is empty");
    const auto h = parse_series_header(parse_json(line));
    if (h.ring != Ring::tag())
        throw SchemaError("series ring '" + h.ring + "' does not match '" + Ring::tag() + "'");
    FormalSeries<Ring> f(h.cone, h.bound);
    f.set_growth(h.growth);
    const Ring ring{};
    std::optional<ConeKey> last;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto j = parse_json(line);
        if (!j.is_object() || !j.contains("T") || !j.contains("coeff"))
            throw SchemaError("series line needs \"T\" and \"coeff\"");
        const auto t = sym_from_json(h.cone.field(), j["T"], h.cone.n());
        if (!h.cone.contains(t))
            throw ValidationError("series index is not a cone point");
        const auto k = h.cone.key(t);
        if (last && !(*last < k))
            throw SchemaError("series lines are not in canonical order");
        last = k;
        f.set(k, coeff_from_json(j["coeff"], ring));
    }
    return f;
}

template <class Ring>
FormalSeries<Ring> read_series_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot read series file '" + path + "'");
    return read_series<Ring>(in);
}

/// Ring tag from a series header line of the file.
std::string series_ring_of_file(const std::string& path);

// Orbit data ------------------------------------------------------------------------

/// {"field", "gram", "d_plus"}.
QuadSpace space_from_json(const json& j);
/// {"field", "gram", "d_plus", "generators": [...], "components": [{"label", "generators"}],
///  "neatness": "enforce" | "relaxed"}.
OrbitDatum datum_from_json(const json& j);
/// {"n": n, "support": [{"x": [vectors], "w": rational}]}.
WeightFunction weight_from_json(const QuadSpace& v, const json& j);
json weight_to_json(const WeightFunction& w);
json class_to_json(const OrbitDatum& od, const CycleClass& c);
json subspace_to_json(const Subspace& w);

/// Space and groups from the datum file; base frame and weight from the data file.
SurrogateDatum surrogate_from_json(const json& datum, const json& data);

}  // namespace ffskit
