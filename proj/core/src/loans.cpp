#include "admit/underwriting.hpp"

#include "admit/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace admit {

namespace {

double round_to(double x, double scale) { return std::round(x * scale) / scale; }

template <std::size_t N>
const char* pick(CounterRng& rng, const std::array<const char*, N>& codes, const std::array<double, N>& weights) {
    double u = rng.uniform();
    for (std::size_t i = 0; i + 1 < N; ++i) {
        if (u < weights[i]) return codes[i];
        u -= weights[i];
    }
    return codes[N - 1];
}

void fill_clean(LoanRecord& loan, CounterRng& rng) {
    loan.ltv = round_to(std::clamp(0.78 + 0.12 * rng.normal(), 0.30, 1.00), 1e4);
    loan.fico = static_cast<int>(std::clamp(std::round(730.0 + 45.0 * rng.normal()), 520.0, 850.0));
    loan.dti = round_to(std::clamp(0.34 + 0.09 * rng.normal(), 0.05, 0.65), 1e3);
    loan.property_type = pick<4>(rng, {"SF", "CO", "PU", "MH"}, {0.60, 0.20, 0.15, 0.05});
    loan.occupancy = pick<3>(rng, {"P", "S", "I"}, {0.85, 0.05, 0.10});
    loan.purpose = pick<3>(rng, {"P", "C", "N"}, {0.50, 0.30, 0.20});
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    for (auto& f : out) {
        const auto b = f.find_first_not_of(' ');
        const auto e = f.find_last_not_of(' ');
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return out;
}

double parse_double(const std::string& s, std::size_t line, const char* field) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw CsvError(line, std::string("bad number in ") + field + ": '" + s + "'");
    }
    return v;
}

}  // namespace

void validate(const LoanRecord& loan) {
    if (loan.loan_id.empty()) throw PreconditionError("loan_id must be nonempty");
    if (!(loan.ltv > 0.0 && loan.ltv <= 1.5)) throw PreconditionError("ltv out of range (0, 1.5]");
    if (loan.fico < 300 || loan.fico > 850) throw PreconditionError("fico out of range [300, 850]");
    if (!(loan.dti > 0.0 && loan.dti <= 1.0)) throw PreconditionError("dti out of range (0, 1]");
}

std::vector<LoanRecord> generate_dataset(std::size_t n, double defect_rate, std::uint64_t seed) {
    if (n < 1) throw PreconditionError("dataset size must be >= 1");
    if (!(defect_rate >= 0.0 && defect_rate <= 0.5)) throw PreconditionError("defect_rate must be in [0, 0.5]");
    std::vector<LoanRecord> loans(n);
    char id[32];
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed, i);
        LoanRecord& loan = loans[i];
        std::snprintf(id, sizeof id, "L%07zu", i);
        loan.loan_id = id;
        loan.defect = rng.uniform() < defect_rate;
        fill_clean(loan, rng);
        if (!loan.defect) continue;
        const double kind = rng.uniform();
        if (kind < 0.5) {
            loan.occupancy = "P|I";
        } else if (kind < 0.75) {
            loan.ltv = round_to(0.98 + 0.27 * rng.uniform(), 1e4);
        } else {
            loan.fico = 500 + static_cast<int>(rng.below(111));
        }
    }
    return loans;
}

void write_loans_csv(std::ostream& out, const std::vector<LoanRecord>& loans) {
    out << kLoanCsvHeader << '\n';
    for (const auto& l : loans) {
        out << l.loan_id << ',' << format_double(l.ltv) << ',' << l.fico << ',' << format_double(l.dti) << ','
            << l.property_type << ',' << l.occupancy << ',' << l.purpose << ',' << (l.defect ? 1 : 0) << '\n';
    }
}

LoanCsv read_loans_csv(std::istream& in) {
    LoanCsv result;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw CsvError(1, "missing header");
    ++lineno;
    const auto header = split_csv(line);
    static const char* required[] = {"loan_id", "ltv", "fico", "dti", "property_type", "occupancy", "purpose", "defect"};
    std::array<std::size_t, 8> col{};
    for (std::size_t r = 0; r < 8; ++r) {
        auto it = std::find(header.begin(), header.end(), required[r]);
        if (it == header.end()) throw CsvError(1, std::string("missing column '") + required[r] + "'");
        col[r] = static_cast<std::size_t>(it - header.begin());
    }
    for (const auto& h : header) {
        if (std::find(std::begin(required), std::end(required), h) == std::end(required)) {
            result.warnings.push_back("ignoring unknown column '" + h + "'");
        }
    }

    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \r") == std::string::npos) continue;
        const auto f = split_csv(line);
        if (f.size() != header.size()) {
            throw CsvError(lineno, "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
        }
        LoanRecord loan;
        loan.loan_id = f[col[0]];
        loan.ltv = parse_double(f[col[1]], lineno, "ltv");
        const double fico = parse_double(f[col[2]], lineno, "fico");
        if (fico != std::floor(fico)) throw CsvError(lineno, "fico must be an integer");
        loan.fico = static_cast<int>(fico);
        loan.dti = parse_double(f[col[3]], lineno, "dti");
        loan.property_type = f[col[4]];
        loan.occupancy = f[col[5]];
        loan.purpose = f[col[6]];
        if (f[col[7]] == "1") loan.defect = true;
        else if (f[col[7]] == "0") loan.defect = false;
        else throw CsvError(lineno, "defect must be 0 or 1");
        try {
            validate(loan);
        } catch (const PreconditionError& e) {
            throw CsvError(lineno, e.what());
        }
        result.loans.push_back(std::move(loan));
    }
    return result;
}

}  // namespace admit
