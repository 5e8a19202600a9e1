#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rayq/backward_error.hpp"

namespace rayq::io {

using nlohmann::json;

/// 15-significant-digit decimal formatting ("%.15g"); the CSV/report
/// number contract.
std::string format_number(double x);
std::string format_complex(Complex z);

/// "a+bi", "a-bi", "a", "bi" or "a,b".
Complex parse_complex(const std::string& text);

/// Matrices on the wire are arrays of rows, each row an array of
/// [re, im] pairs.
json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const json& j, const std::string& context);

/// System document: { "n", "k", "H", "constraints": [...] }.
json system_to_json(const ConstraintSystem& sys);
ConstraintSystem system_from_json(const json& j);
ConstraintSystem parse_system(const std::filesystem::path& path);

/// Polynomial document: { "degree", "n", "structure", "coefficients": [...] }.
json polynomial_to_json(const MatrixPolynomial& p);
MatrixPolynomial polynomial_from_json(const json& j);
MatrixPolynomial parse_polynomial(const std::filesystem::path& path);

/// Plain matrix document: { "M": [...] }.
json matrix_file_to_json(const Matrix& m);
Matrix parse_matrix_file(const std::filesystem::path& path);

json load_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// One backward-error evaluation; serializes to JSON and to a CSV row.
struct ReportRecord {
    Complex lambda;
    double eta_unstructured = 0.0;
    double eta_structured = 0.0;
    EtaStatus status = EtaStatus::bound_only;
    double m_value = 0.0;
    RealVector t_hat;
    double seconds = 0.0;  // omitted from output unless with_timings
};

json record_to_json(const ReportRecord& r, bool with_timings);
std::string record_csv_header();
std::string record_csv_row(const ReportRecord& r);

/// Experiment CSV column contract (golden-tested):
/// lambda_re,lambda_im,eta_unstructured,eta_structured,status
std::string experiment_csv_header();
std::string experiment_csv_row(const ReportRecord& r);

/// Report for the mhs command.
json mhs_report_to_json(const ConstraintSystem& sys, const MValue& m, bool tilde,
                        bool with_timings, double seconds);
std::string mhs_csv_header();
std::string mhs_csv_row(const MValue& m, bool tilde);

}  // namespace rayq::io
