#include "rmrelax/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "rmrelax/error.hpp"

namespace rmrelax::io {

namespace {

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io_error, "cannot write " + path.string());
    return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            fail(ErrorKind::invalid_argument, "CSV row width differs from the header");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt("%.17g", row[i]);
        out << '\n';
    }
    if (!out) fail(ErrorKind::io_error, "write failed for " + path.string());
}

std::size_t Table::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(ErrorKind::missing_column, "no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

Table read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io_error, "cannot read " + path.string());
    Table t;
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::parse_error, path.string() + " is empty");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        for (std::string cell; std::getline(rs, cell, ',');) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(ErrorKind::parse_error, "bad number '" + cell + "' in " + path.string());
            }
        }
        if (row.size() != t.header.size())
            fail(ErrorKind::parse_error, "ragged row in " + path.string());
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io_error, "cannot read " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        fail(ErrorKind::io_error, "SHA-256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

void emit_plot(const std::filesystem::path& csv, const PlotSpec& spec,
               const std::filesystem::path& svg) {
    const Table t = read_csv(csv);
    const std::size_t xc = t.column(spec.x);
    std::vector<std::size_t> ycs;
    for (const auto& y : spec.y) ycs.push_back(t.column(y));

    double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
    for (const auto& row : t.rows) {
        if (!std::isfinite(row[xc])) continue;
        x0 = std::min(x0, row[xc]);
        x1 = std::max(x1, row[xc]);
        for (std::size_t c : ycs)
            if (std::isfinite(row[c])) {
                y0 = std::min(y0, row[c]);
                y1 = std::max(y1, row[c]);
            }
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    auto out = open_out(svg);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << spec.title << "</text>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
        << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4;
        const double yv = y0 + (y1 - y0) * k / 4;
        out << "<text x=\"" << fmt("%.2f", px(xv)) << "\" y=\"" << H - B + 16
            << "\" text-anchor=\"middle\">" << fmt("%.4g", xv) << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << fmt("%.2f", py(yv) + 4)
            << "\" text-anchor=\"end\">" << fmt("%.4g", yv) << "</text>\n";
    }
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
        << spec.x << "</text>\n";
    out << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (T + H - B) / 2 << ")\">" << (spec.y_label.empty() ? spec.y.front() : spec.y_label)
        << "</text>\n";
    for (std::size_t i = 0; i < ycs.size(); ++i) {
        const char* color = colors[i % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& row : t.rows) {
            if (!std::isfinite(row[xc]) || !std::isfinite(row[ycs[i]])) continue;
            out << (first ? "" : " ") << fmt("%.2f", px(row[xc])) << ',' << fmt("%.2f", py(row[ycs[i]]));
            first = false;
        }
        out << "\"/>\n";
        const double ly = T + 16 + 18 * i;
        out << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << W - R + 36 << "\" y=\"" << ly << "\">" << spec.y[i] << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) fail(ErrorKind::io_error, "write failed for " + svg.string());
}

}  // namespace rmrelax::io
