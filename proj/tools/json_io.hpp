// SPDX-License-Identifier: Apache-2.0
//! \file tools/json_io.hpp
//! JSON input and output for the command-line tool.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alphaperm/compare.hpp"
#include "alphaperm/crossing.hpp"
#include "alphaperm/loop.hpp"
#include "alphaperm/matrix.hpp"
#include "alphaperm/polynomial.hpp"
#include "alphaperm/rational.hpp"

namespace alphaperm::io
{

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/*!
 * Matrix file: {"d": 2, "mode": "rational" | "float",
 *               "entries": [["0", "1/2"], ["1/2", "0"]], "labels": [...]}.
 *
 * Entries may be strings ("1/3", "0.25") or JSON numbers. Without "mode",
 * a matrix is rational unless some entry is a non-integer JSON number.
 * Float-mode entries are held exactly as the binary double value.
 */
struct MatrixInput
{
    SquareMatrix<Rational> exact;
    bool float_mode = false;
    std::vector<std::string> labels; //!< empty when not given
};

inline MatrixInput parse_matrix(Json const& j)
{
    if (!j.is_object() || !j.contains("entries"))
        throw domain_error("matrix JSON needs an \"entries\" array");
    auto const& rows = j.at("entries");
    if (!rows.is_array())
        throw domain_error("\"entries\" must be an array of rows");
    std::size_t const d = rows.size();
    if (j.contains("d") && j.at("d").get<std::size_t>() != d)
        throw domain_error("\"d\" does not match the number of rows");

    MatrixInput m;
    bool any_float_number = false;
    for (auto const& row : rows)
    {
        if (!row.is_array() || row.size() != d)
            throw domain_error("matrix must be square");
        for (auto const& e : row)
            if (e.is_number_float())
                any_float_number = true;
    }
    if (j.contains("mode"))
    {
        auto mode = j.at("mode").get<std::string>();
        if (mode != "rational" && mode != "float")
            throw domain_error("mode must be \"rational\" or \"float\"");
        m.float_mode = mode == "float";
    }
    else
    {
        m.float_mode = any_float_number;
    }

    m.exact = SquareMatrix<Rational>(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
        {
            auto const& e = rows[i][k];
            Rational v;
            if (e.is_string())
                v = parse_rational(e.get<std::string>());
            else if (e.is_number_integer())
                v = Rational(e.get<long>());
            else if (e.is_number_float())
                v = rational_from_double(e.get<double>());
            else
                throw domain_error("matrix entries must be numbers or strings");
            if (m.float_mode)
                v = rational_from_double(v.get_d());
            m.exact(i, k) = v;
        }
    if (j.contains("labels"))
    {
        m.labels = j.at("labels").get<std::vector<std::string>>();
        if (m.labels.size() != d)
            throw domain_error("label count does not match matrix dimension");
    }
    return m;
}

inline MatrixInput load_matrix(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw domain_error("cannot open matrix file " + path);
    Json j;
    try
    {
        j = Json::parse(in);
    }
    catch (nlohmann::json::exception const& e)
    {
        throw domain_error("invalid JSON in " + path + ": " + e.what());
    }
    return parse_matrix(j);
}

//---------------------------------------------------------------------------//
inline Json to_json(Rational const& r)
{
    return to_string(r);
}

template<Scalar T>
Json matrix_json(SquareMatrix<T> const& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i)
    {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.dim(); ++k)
        {
            if constexpr (is_exact_v<T>)
                row.push_back(to_string(m(i, k)));
            else
                row.push_back(static_cast<double>(m(i, k)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json crossing_json(CrossingMatrix const& n)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < n.dim(); ++i)
    {
        Json row = Json::array();
        for (std::size_t k = 0; k < n.dim(); ++k)
            row.push_back(n(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json polynomial_json(AlphaPolynomial const& p)
{
    Json coeffs = Json::array();
    for (auto const& c : p.coeffs())
        coeffs.push_back(to_string(c));
    return Json{{"text", to_string(p)}, {"coeffs", coeffs}};
}

inline Json law_report_json(LawReport const& r)
{
    Json rows = Json::array();
    for (auto const& row : r.rows)
        rows.push_back(Json{{"outcome", row.outcome},
                            {"theory", row.theory},
                            {"count", row.count},
                            {"empirical", row.empirical},
                            {"std_error", row.std_error},
                            {"z", std::isfinite(row.z) ? Json(row.z) : Json("inf")},
                            {"tested", row.tested},
                            {"pass", row.pass}});
    return Json{{"verdict", r.pass ? "pass" : "fail"},
                {"samples", r.samples},
                {"theory_enumerated", r.theory_enumerated},
                {"tail_theory", r.tail_theory},
                {"tail_count", r.tail_count},
                {"max_abs_z", r.max_abs_z},
                {"chi_square", r.chi_square},
                {"dof", r.dof},
                {"p_value", r.p_value},
                {"failures", r.failures},
                {"rows", rows}};
}

inline std::string law_report_csv(LawReport const& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "outcome,theory,empirical\n";
    for (auto const& row : r.rows)
        os << '"' << row.outcome << "\"," << row.theory << ',' << row.empirical << '\n';
    return os.str();
}

inline std::string format_vector(std::vector<unsigned> const& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline std::string format_crossing(CrossingMatrix const& n)
{
    std::string s;
    for (std::size_t i = 0; i < n.dim(); ++i)
    {
        s += i ? ";" : "";
        for (std::size_t k = 0; k < n.dim(); ++k)
            s += (k ? "," : "") + std::to_string(n(i, k));
    }
    return s;
}

} // namespace alphaperm::io
