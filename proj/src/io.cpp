#include "rayq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rayq::io {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

std::string format_complex(Complex z) {
    std::string out = format_number(z.real());
    if (z.imag() >= 0.0 || std::isnan(z.imag()))
        out += "+" + format_number(z.imag()) + "i";
    else
        out += "-" + format_number(-z.imag()) + "i";
    return out;
}

Complex parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InputError("empty complex number");

    auto parse_real = [](const std::string& part) {
        if (part == "+" || part.empty()) return 1.0;
        if (part == "-") return -1.0;
        char* end = nullptr;
        const double v = std::strtod(part.c_str(), &end);
        if (end != part.c_str() + part.size())
            throw InputError("cannot parse number '" + part + "'");
        return v;
    };

    const auto comma = s.find(',');
    if (comma != std::string::npos)
        return {parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1))};

    if (s.back() == 'i' || s.back() == 'j') {
        const std::string body = s.substr(0, s.size() - 1);
        // Split at the last +/- that is not an exponent sign.
        for (size_t pos = body.size(); pos-- > 1;) {
            if ((body[pos] == '+' || body[pos] == '-') &&
                body[pos - 1] != 'e' && body[pos - 1] != 'E')
                return {parse_real(body.substr(0, pos)), parse_real(body.substr(pos))};
        }
        return {0.0, parse_real(body)};
    }
    return {parse_real(s), 0.0};
}

json matrix_to_json(const Matrix& a) {
    json rows = json::array();
    for (Index i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < a.cols(); ++j)
            row.push_back(json::array({a(i, j).real(), a(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.empty())
        throw InputError(context + ": expected a non-empty array of rows");
    const Index rows = static_cast<Index>(j.size());
    if (!j[0].is_array() || j[0].empty())
        throw InputError(context + ": row 0 must be a non-empty array");
    const Index cols = static_cast<Index>(j[0].size());

    Matrix out(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw InputError(context + ": row " + std::to_string(r) + " has " +
                             std::to_string(row.size()) + " entries, expected " +
                             std::to_string(cols));
        for (Index c = 0; c < cols; ++c) {
            const json& cell = row[static_cast<size_t>(c)];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number())
                throw InputError(context + "[" + std::to_string(r) + "][" +
                                 std::to_string(c) + "]: complex entry must be [re, im]");
            out(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    if (!out.allFinite())
        throw InputError(context + ": matrix has non-finite entries");
    return out;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path.string() + "': " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

json system_to_json(const ConstraintSystem& sys) {
    json j;
    j["n"] = sys.dim();
    j["k"] = sys.k();
    j["H"] = matrix_to_json(sys.h().get());
    json cs = json::array();
    for (const auto& s : sys.constraints()) cs.push_back(matrix_to_json(s.get()));
    j["constraints"] = std::move(cs);
    return j;
}

ConstraintSystem system_from_json(const json& j) {
    if (!j.contains("H")) throw InputError("system document: missing field 'H'");
    if (!j.contains("constraints") || !j["constraints"].is_array() || j["constraints"].empty())
        throw InputError("system document: 'constraints' must be a non-empty array");

    Matrix h = matrix_from_json(j["H"], "H");
    std::vector<SymmetricMatrix> constraints;
    for (size_t i = 0; i < j["constraints"].size(); ++i) {
        const std::string ctx = "constraints[" + std::to_string(i) + "]";
        Matrix s = matrix_from_json(j["constraints"][i], ctx);
        try {
            constraints.emplace_back(s);
        } catch (const StructureError& e) {
            throw StructureError(ctx + ": " + e.what());
        }
    }
    if (j.contains("n") && j["n"].get<Index>() != h.rows())
        throw InputError("system document: field 'n' = " + j["n"].dump() +
                         " does not match H (" + std::to_string(h.rows()) + ")");
    if (j.contains("k") && j["k"].get<Index>() != static_cast<Index>(constraints.size()) - 1)
        throw InputError("system document: field 'k' does not match the constraint count");
    try {
        return ConstraintSystem(HermitianMatrix(h), std::move(constraints));
    } catch (const StructureError& e) {
        throw StructureError(std::string("H: ") + e.what());
    }
}

ConstraintSystem parse_system(const std::filesystem::path& path) {
    return system_from_json(load_json(path));
}

json polynomial_to_json(const MatrixPolynomial& p) {
    json j;
    j["degree"] = p.degree();
    j["n"] = p.size();
    j["structure"] = to_string(p.structure());
    json cs = json::array();
    for (const auto& a : p.coefficients()) cs.push_back(matrix_to_json(a));
    j["coefficients"] = std::move(cs);
    return j;
}

MatrixPolynomial polynomial_from_json(const json& j) {
    if (!j.contains("coefficients") || !j["coefficients"].is_array() ||
        j["coefficients"].size() < 2)
        throw InputError("polynomial document: 'coefficients' must list at least two matrices");
    const Structure st =
        j.contains("structure") ? structure_from_string(j["structure"].get<std::string>())
                                : Structure::none;

    std::vector<Matrix> coeffs;
    for (size_t i = 0; i < j["coefficients"].size(); ++i)
        coeffs.push_back(
            matrix_from_json(j["coefficients"][i], "coefficients[" + std::to_string(i) + "]"));

    if (j.contains("degree") &&
        j["degree"].get<Index>() != static_cast<Index>(coeffs.size()) - 1)
        throw InputError("polynomial document: field 'degree' does not match the " +
                         std::to_string(coeffs.size()) + " coefficients");
    if (j.contains("n") && j["n"].get<Index>() != coeffs.front().rows())
        throw InputError("polynomial document: field 'n' does not match the coefficients");
    return MatrixPolynomial(std::move(coeffs), st);
}

MatrixPolynomial parse_polynomial(const std::filesystem::path& path) {
    return polynomial_from_json(load_json(path));
}

json matrix_file_to_json(const Matrix& m) {
    json j;
    j["M"] = matrix_to_json(m);
    return j;
}

Matrix parse_matrix_file(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.contains("M")) throw InputError("matrix document: missing field 'M'");
    return matrix_from_json(j["M"], "M");
}

namespace {

json real_vector_to_json(const RealVector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

std::string quoted_vector(const RealVector& v) {
    std::string out = "\"";
    for (Index i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += format_number(v[i]);
    }
    return out + "\"";
}

}  // namespace

json record_to_json(const ReportRecord& r, bool with_timings) {
    json j;
    j["lambda"] = json::array({r.lambda.real(), r.lambda.imag()});
    j["eta_unstructured"] = r.eta_unstructured;
    j["eta_structured"] = r.eta_structured;
    j["status"] = to_string(r.status);
    j["m_value"] = r.m_value;
    j["t_hat"] = real_vector_to_json(r.t_hat);
    if (with_timings) j["seconds"] = r.seconds;
    return j;
}

std::string record_csv_header() {
    return "lambda_re,lambda_im,eta_unstructured,eta_structured,status,m_value,t_hat";
}

std::string record_csv_row(const ReportRecord& r) {
    std::string out;
    out += format_number(r.lambda.real()) + ",";
    out += format_number(r.lambda.imag()) + ",";
    out += format_number(r.eta_unstructured) + ",";
    out += format_number(r.eta_structured) + ",";
    out += to_string(r.status) + ",";
    out += format_number(r.m_value) + ",";
    out += quoted_vector(r.t_hat);
    return out;
}

std::string experiment_csv_header() {
    return "lambda_re,lambda_im,eta_unstructured,eta_structured,status";
}

std::string experiment_csv_row(const ReportRecord& r) {
    std::string out;
    out += format_number(r.lambda.real()) + ",";
    out += format_number(r.lambda.imag()) + ",";
    out += format_number(r.eta_unstructured) + ",";
    out += format_number(r.eta_structured) + ",";
    out += to_string(r.status);
    return out;
}

json mhs_report_to_json(const ConstraintSystem& sys, const MValue& m, bool tilde,
                        bool with_timings, double seconds) {
    const MinimizationResult& r = m.minimization;
    json j;
    j["problem"] = tilde ? "m_tilde" : "m";
    j["value"] = m.value;
    j["status"] = to_string(m.status);
    j["lambda2_hat"] = r.lambda2_hat;
    j["is_simple"] = r.is_simple;
    j["t_hat"] = real_vector_to_json(r.t_hat);
    if (r.beta) j["beta"] = *r.beta;
    if (r.c_value) j["c"] = *r.c_value;
    if (r.certificate) {
        json cert = json::array();
        for (Index i = 0; i < r.certificate->size(); ++i)
            cert.push_back(json::array(
                {(*r.certificate)[i].real(), (*r.certificate)[i].imag()}));
        j["certificate"] = std::move(cert);
        j["certificate_residual"] = certificate_residual(sys, *r.certificate, r.lambda2_hat);
    }
    if (with_timings) j["seconds"] = seconds;
    return j;
}

std::string mhs_csv_header() {
    return "problem,value,status,lambda2_hat,is_simple,beta,c,certificate_residual,t_hat";
}

std::string mhs_csv_row(const MValue& m, bool tilde) {
    const MinimizationResult& r = m.minimization;
    std::string out;
    out += std::string(tilde ? "m_tilde" : "m") + ",";
    out += format_number(m.value) + ",";
    out += to_string(m.status) + ",";
    out += format_number(r.lambda2_hat) + ",";
    out += (r.is_simple ? "true" : "false") + std::string(",");
    out += (r.beta ? format_number(*r.beta) : "") + ",";
    out += (r.c_value ? format_number(*r.c_value) : "") + ",";
    out += (std::isnan(r.certificate_residual) ? "" : format_number(r.certificate_residual)) + ",";
    out += quoted_vector(r.t_hat);
    return out;
}

}  // namespace rayq::io
