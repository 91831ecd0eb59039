#ifndef VLAB_IO_HPP
#define VLAB_IO_HPP

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vlab/eisenstein.hpp"
#include "vlab/families.hpp"

namespace vlab
{
    // std::map-backed: object keys always serialize sorted, so identical
    // reports are byte-identical
    using Json = nlohmann::json;

    inline std::string big_str(const BigInt& n) { return n.str(); }

    /** element as nested coordinate arrays: m rows of e integers mod p */
    inline Json elem_json(const FieldElement& x)
    {
        const FieldPtr& F = x.field();
        Json rows = Json::array();
        for (uint32_t i = 0; i < F->m(); ++i) {
            Json row = Json::array();
            for (uint32_t k = 0; k < F->e(); ++k) row.push_back(x.coords()[(size_t)i * F->e() + k]);
            rows.push_back(std::move(row));
        }
        return rows;
    }

    inline Json field_json(const FieldPtr& F)
    {
        Json mod = Json::array();
        for (uint32_t i = 0; i <= F->m(); ++i) {
            Json row = Json::array();
            for (uint32_t k = 0; k < F->e(); ++k)
                row.push_back(F->modulus_flat()[(size_t)i * F->e() + k]);
            mod.push_back(std::move(row));
        }
        return Json{{"p", F->p()},
                    {"e", F->e()},
                    {"m", F->m()},
                    {"ground_modulus", F->ground_modulus()},
                    {"modulus", std::move(mod)}};
    }

    inline Json family_json(const std::vector<IsobaricForm>& fam)
    {
        if (fam.empty()) throw invalid_input("family_json: empty family");
        const WeightSystem& ws = fam[0].weights();
        Json forms = Json::array();
        Json weights = Json::array();
        for (const auto& f : fam) {
            Json terms = Json::array();
            for (const auto& [ex, c] : f.terms())
                terms.push_back(Json{{"coeff", elem_json(c)}, {"exps", ex}});
            forms.push_back(Json{{"terms", std::move(terms)}});
            weights.push_back(f.weight());
        }
        return Json{{"q", ws.q},
                    {"r", ws.r},
                    {"generators", fam[0].generator_set() == GenSet::g ? "g" : "gh"},
                    {"type", fam[0].type()},
                    {"weights", std::move(weights)},
                    {"forms", std::move(forms)}};
    }

    /**
     * Parse a family from the form-file schema:
     * {"q", "r", "generators": "g"|"gh", "forms": [{"terms": [{"coeff":
     * [[..]], "exps": [..]}..]}..]}.  Every malformation surfaces as
     * invalid_input.
     */
    inline std::vector<IsobaricForm> parse_family(const Json& j)
    {
        try {
            uint64_t q = j.at("q").get<uint64_t>();
            uint32_t r = j.at("r").get<uint32_t>();
            std::string gs = j.at("generators").get<std::string>();
            if (gs != "g" && gs != "gh") throw invalid_input("generators must be \"g\" or \"gh\"");
            WeightSystem ws(q, r);
            auto [p, e] = factor_prime_power(q);
            auto Fq = ExtensionField::create(p, e, 1);

            std::vector<IsobaricForm> fam;
            for (const auto& jf : j.at("forms")) {
                std::vector<std::pair<Exps, FieldElement>> terms;
                for (const auto& jt : jf.at("terms")) {
                    Exps ex = jt.at("exps").get<Exps>();
                    if (ex.size() != r) throw invalid_input("exps length must equal r");
                    auto rows = jt.at("coeff").get<std::vector<std::vector<uint32_t>>>();
                    terms.emplace_back(std::move(ex), Fq->from_coords(rows));
                }
                fam.emplace_back(ws, gs == "g" ? GenSet::g : GenSet::gh, Fq, terms);
            }
            if (fam.empty()) throw invalid_input("form file contains no forms");
            return fam;
        } catch (const Json::exception& ex) {
            throw invalid_input(std::string("malformed form file: ") + ex.what());
        }
    }

    inline Json valence_json(const ValenceReport& R, const std::vector<IsobaricForm>& fam)
    {
        Json orbits = Json::array();
        for (const auto& E : R.orbits) {
            const ZeroRecord& rep = R.locus.records[E.rep_index];
            Json pt = Json::array();
            for (const auto& c : rep.point) pt.push_back(elem_json(c));
            orbits.push_back(Json{{"point", std::move(pt)},
                                  {"field", field_json(rep.field)},
                                  {"chart", rep.chart},
                                  {"min_degree", rep.min_degree},
                                  {"support", E.support},
                                  {"s", E.s},
                                  {"boundary", E.boundary},
                                  {"stab_order", big_str(E.stab_order)},
                                  {"orbit_count", E.orbit_count},
                                  {"record_count", E.record_count},
                                  {"nu_x", E.nu_x},
                                  {"nu_z", frac_str(E.nu_z)},
                                  {"nu_omega", frac_str(E.nu_omega)}});
        }
        return Json{{"family", family_json(fam)},
                    {"bezout", R.locus.bezout},
                    {"records_total", R.locus.records.size()},
                    {"orbits", std::move(orbits)},
                    {"lhs_interior", frac_str(R.lhs_interior)},
                    {"lhs_boundary", frac_str(R.lhs_boundary)},
                    {"rhs", frac_str(R.rhs)},
                    {"verdict", R.verdict}};
    }

    inline std::string valence_csv_header() { return "family,weights,lhs_interior,lhs_boundary,rhs,verdict"; }

    inline std::string valence_csv_row(const ValenceReport& R, const std::vector<IsobaricForm>& fam)
    {
        std::ostringstream os;
        os << (fam[0].generator_set() == GenSet::g ? "g" : "gh");
        if (fam[0].generator_set() == GenSet::gh) os << ":type=" << fam[0].type();
        os << ",";
        for (size_t i = 0; i < R.weights.size(); ++i) os << (i ? ";" : "") << R.weights[i];
        os << "," << frac_str(R.lhs_interior) << "," << frac_str(R.lhs_boundary) << ","
           << frac_str(R.rhs) << "," << (R.verdict ? "true" : "false");
        return os.str();
    }

    inline Json group_orders_json(uint64_t q, uint32_t r, const GroupOrders& G)
    {
        return Json{{"q", q},
                    {"r", r},
                    {"order_H", big_str(G.order_H)},
                    {"order_Hprime", big_str(G.order_Hprime)},
                    {"index", big_str(G.index)},
                    {"expected_index", G.expected_index},
                    {"match", G.match}};
    }

    inline Json count_json(const CountIdentity& ci)
    {
        Json strata = Json::object(), orbits = Json::object();
        for (const auto& [s, c] : ci.inventory.strata) strata[std::to_string(s)] = big_str(c);
        for (const auto& [s, c] : ci.inventory.orbits) orbits[std::to_string(s)] = big_str(c);
        return Json{{"q", ci.inventory.q},
                    {"r", ci.inventory.r},
                    {"n", ci.inventory.n},
                    {"total", big_str(ci.inventory.total)},
                    {"gl_order", big_str(ci.inventory.gl)},
                    {"strata", std::move(strata)},
                    {"orbits", std::move(orbits)},
                    {"lhs", frac_str(ci.lhs)},
                    {"rhs", frac_str(ci.rhs)},
                    {"verdict", ci.verdict}};
    }

    inline std::string inventory_csv(const CountIdentity& ci)
    {
        std::ostringstream os;
        os << "q,r,n,s,count,orbits\n";
        for (const auto& [s, c] : ci.inventory.strata)
            os << ci.inventory.q << "," << ci.inventory.r << "," << ci.inventory.n << "," << s
               << "," << big_str(c) << "," << big_str(ci.inventory.orbits.at(s)) << "\n";
        return os.str();
    }

    inline Json zero_locus_json(const ZeroLocusScan& s)
    {
        Json zeros = Json::array();
        for (const auto& z : s.zeros) {
            Json pt = Json::array();
            for (const auto& c : z.coords) pt.push_back(elem_json(c));
            zeros.push_back(Json{{"m", z.m},
                                 {"field", field_json(z.field)},
                                 {"point", std::move(pt)},
                                 {"jacobian", elem_json(z.jac_det)},
                                 {"in_expected_set", z.in_expected_set}});
        }
        return Json{{"q", s.q},
                    {"r", s.r},
                    {"n", s.n},
                    {"scan_bound", s.scan_bound},
                    {"indices", s.indices},
                    {"expected", big_str(s.expected)},
                    {"zeros", std::move(zeros)},
                    {"jacobians_nonzero", s.jacobians_nonzero},
                    {"verdict", s.verdict}};
    }

    inline Json scan_json(const ScanCertificate& c)
    {
        Json out{{"q", c.q},
                 {"r", c.r},
                 {"scan_bound", c.scan_bound},
                 {"classes_checked", big_str(c.classes_checked)},
                 {"windows_checked", big_str(c.windows_checked)},
                 {"verdict", c.verdict}};
        if (c.counterexample) {
            Json pt = Json::array();
            for (const auto& x : c.counterexample->coords) pt.push_back(elem_json(x));
            out["counterexample"] = Json{{"m", c.counterexample->m},
                                         {"field", field_json(c.counterexample->field)},
                                         {"point", std::move(pt)},
                                         {"window_start", c.counterexample->window_start}};
        } else {
            out["counterexample"] = nullptr;
        }
        return out;
    }

    /** write text to a path, or to stdout for "" / "-" */
    inline void write_text(const std::string& path, const std::string& text)
    {
        if (path.empty() || path == "-") {
            std::cout << text;
            std::cout.flush();
            return;
        }
        std::ofstream os(path, std::ios::binary);
        if (!os) throw invalid_input("cannot open output path: " + path);
        os << text;
        if (!os) throw invalid_input("write failed: " + path);
    }

    inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

    inline Json read_json_file(const std::string& path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw invalid_input("cannot open input path: " + path);
        try {
            return Json::parse(is);
        } catch (const Json::exception& ex) {
            throw invalid_input(std::string("malformed JSON in ") + path + ": " + ex.what());
        }
    }
}

#endif
