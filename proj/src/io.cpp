#include "bfns/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "bfns/error.hpp"

namespace bfns {

namespace {

constexpr char kMagic[4] = {'B', 'F', 'N', 'S'};

template <class T>
void put(std::vector<std::uint8_t>& out, T v) {
    std::uint8_t b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.insert(out.end(), b, b + sizeof(T));
}

class Reader {
public:
    Reader(const std::vector<std::uint8_t>& b, std::string origin) : b_(b), origin_(std::move(origin)) {}

    template <class T>
    T get() {
        if (pos_ + sizeof(T) > b_.size()) throw CorruptionError(origin_ + ": truncated file");
        std::uint8_t tmp[sizeof(T)];
        std::memcpy(tmp, b_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(tmp, tmp + sizeof(T));
        pos_ += sizeof(T);
        T v;
        std::memcpy(&v, tmp, sizeof(T));
        return v;
    }
    std::size_t remaining() const { return b_.size() - pos_; }
    const std::string& origin() const { return origin_; }

private:
    const std::vector<std::uint8_t>& b_;
    std::string origin_;
    std::size_t pos_ = 0;
};

std::size_t cube_size(int dim, int modes) {
    std::size_t n = 1;
    for (int j = 0; j < dim; ++j) n *= std::size_t(2 * modes + 1);
    return n;
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::string fmt_int(long long v) { return std::to_string(v); }

}  // namespace

std::size_t trajectory_file_size(int dim, int modes, std::size_t count) {
    return kTrajectoryHeaderBytes + count * (8 + std::size_t(dim) * cube_size(dim, modes) * 16);
}

std::vector<std::uint8_t> encode_trajectory(const Trajectory& traj) {
    const SimConfig& c = traj.config;
    std::vector<std::uint8_t> out;
    out.reserve(trajectory_file_size(c.dim, c.modes, traj.snapshots.size()));
    out.insert(out.end(), kMagic, kMagic + 4);
    put<std::uint32_t>(out, kTrajectoryVersion);
    put<std::uint8_t>(out, std::uint8_t(c.dim));
    put<std::uint32_t>(out, std::uint32_t(c.modes));
    put<double>(out, c.beta);
    put<double>(out, c.mu);
    put<double>(out, c.alpha);
    put<double>(out, c.n_cut);
    put<std::uint64_t>(out, traj.snapshots.size());
    for (const auto& s : traj.snapshots) {
        if (s.state.dim() != c.dim || s.state.modes() != c.modes)
            throw ParameterError("snapshot shape does not match the trajectory config");
        put<double>(out, s.t);
        for (const Complex& z : s.state.coefficients()) {
            put<double>(out, z.real());
            put<double>(out, z.imag());
        }
    }
    return out;
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
    const auto bytes = encode_trajectory(traj);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path + ": cannot open for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    f.close();
    if (!f) throw IoError(path + ": write failed");
}

Trajectory decode_trajectory(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError(origin + ": not a BFNS trajectory file");
    if (bytes.size() < kTrajectoryHeaderBytes) throw CorruptionError(origin + ": truncated header");
    Reader r(bytes, origin);
    r.get<std::uint32_t>();
    const auto version = r.get<std::uint32_t>();
    if (version != kTrajectoryVersion)
        throw VersionError(origin + ": unsupported version " + std::to_string(version));
    Trajectory traj;
    SimConfig& c = traj.config;
    c.dim = r.get<std::uint8_t>();
    const auto modes = r.get<std::uint32_t>();
    c.beta = r.get<double>();
    c.mu = r.get<double>();
    c.alpha = r.get<double>();
    c.n_cut = r.get<double>();
    const auto count = r.get<std::uint64_t>();
    if ((c.dim != 2 && c.dim != 3) || modes < 1 || modes > 4096)
        throw IntegrityError(origin + ": invalid dimension or mode count");
    c.modes = int(modes);
    if (!(c.beta >= 1.0) || !(c.mu > 0.0) || !(c.alpha > 0.0) || !(c.n_cut > 0.0) || std::isnan(c.n_cut))
        throw IntegrityError(origin + ": invalid physical parameters");
    const std::size_t per = 8 + std::size_t(c.dim) * cube_size(c.dim, c.modes) * 16;
    if (count > r.remaining() / per) throw CorruptionError(origin + ": truncated payload");
    if (count * per != r.remaining()) throw CorruptionError(origin + ": trailing bytes after payload");

    traj.snapshots.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Snapshot s;
        s.t = r.get<double>();
        s.state = SpectralField(c.dim, c.modes);
        for (Complex& z : s.state.coefficients()) {
            const double re = r.get<double>();
            z = Complex(re, r.get<double>());
        }
        if (!std::isfinite(s.t) || (i > 0 && !(s.t > traj.snapshots.back().t)))
            throw IntegrityError(origin + ": snapshot times are not increasing");
        if (auto bad = invariant_violation(s.state))
            throw IntegrityError(origin + ": snapshot " + std::to_string(i) + ": " + *bad);
        traj.snapshots.push_back(std::move(s));
    }
    if (!traj.snapshots.empty()) {
        c.tau = traj.snapshots.front().t;
        c.t_end = traj.snapshots.back().t;
        c.dt = count > 1 ? traj.snapshots[1].t - c.tau : 1.0;
    }
    c.snapshot_stride = 1;
    return traj;
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path + ": cannot open for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_trajectory(bytes, path);
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (b != e && *b == '+') ++b;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw FormatError("not a number: '" + std::string(s) + "'");
    return v;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw FormatError("no column '" + std::string(name) + "'");
}

std::string to_csv(const CsvTable& t) {
    std::string out;
    for (const auto& c : t.comments) out += "# " + c + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += quote(cells[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    std::size_t i = 0;
    bool header_seen = false;
    while (i < text.size()) {
        if (!header_seen && text[i] == '#') {
            std::size_t e = text.find('\n', i);
            if (e == std::string_view::npos) e = text.size();
            std::string_view c = text.substr(i + 1, e - i - 1);
            if (!c.empty() && c.back() == '\r') c.remove_suffix(1);
            if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
            t.comments.emplace_back(c);
            i = e + 1;
            continue;
        }
        std::vector<std::string> rec;
        std::string cell;
        bool quoted = false, done = false;
        while (!done) {
            if (i >= text.size()) {
                if (quoted) throw FormatError("unterminated quoted CSV field");
                rec.push_back(std::move(cell));
                done = true;
            } else if (quoted) {
                if (text[i] == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        cell += '"';
                        i += 2;
                    } else {
                        quoted = false;
                        ++i;
                    }
                } else {
                    cell += text[i++];
                }
            } else if (text[i] == '"' && cell.empty()) {
                quoted = true;
                ++i;
            } else if (text[i] == ',') {
                rec.push_back(std::move(cell));
                cell.clear();
                ++i;
            } else if (text[i] == '\n' || text[i] == '\r') {
                if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
                ++i;
                rec.push_back(std::move(cell));
                done = true;
            } else {
                cell += text[i++];
            }
        }
        if (!header_seen) {
            t.header = std::move(rec);
            header_seen = true;
        } else {
            if (rec.size() != t.header.size()) throw FormatError("CSV row width differs from the header");
            t.rows.push_back(std::move(rec));
        }
    }
    return t;
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path + ": cannot open for writing");
    f << text;
    f.close();
    if (!f) throw IoError(path + ": write failed");
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_csv(const CsvTable& table, const std::string& path) { write_text(to_csv(table), path); }

CsvTable read_csv(const std::string& path) { return parse_csv(read_text(path)); }

CsvTable ledger_table(const EnergyLedger& L) {
    CsvTable t;
    t.header = {"t", "h_norm_sq", "v_norm_sq", "lbeta_norm", "fn_val", "work", "V", "J"};
    for (std::size_t i = 0; i < L.size(); ++i)
        t.add_row({format_double(L.t[i]), format_double(L.h_norm_sq[i]), format_double(L.v_norm_sq[i]),
                   format_double(L.lbeta_pow[i]), format_double(L.fn_damping[i]), format_double(L.work[i]),
                   format_double(L.V[i]), format_double(L.J[i])});
    return t;
}

CsvTable stability_table(const StabilityReport& rep) {
    CsvTable t;
    t.header = {"kind", "eps", "delta", "eta", "sup_w2", "denom", "ratio", "gamma_hat"};
    for (const auto& r : rep.rows) {
        if (r.status != "ok") {
            t.add_row({r.kind, format_double(r.eps), format_double(r.delta), format_double(r.eta), r.status, "", "",
                       ""});
            continue;
        }
        t.add_row({r.kind, format_double(r.eps), format_double(r.delta), format_double(r.eta),
                   format_double(r.sup_w2), format_double(r.denom), format_double(r.ratio),
                   format_double(r.gamma_hat)});
    }
    return t;
}

CsvTable kneser_table(const KneserResult& res) {
    CsvTable t;
    t.header = {"level", "rho", "n_cut", "branch", "endpoint_norm", "gap_prev"};
    for (const auto& r : res.rows)
        t.add_row({fmt_int(r.level), format_double(r.rho), format_double(r.n_cut), fmt_int(r.branch),
                   format_double(r.endpoint_norm), format_double(r.gap_prev)});
    return t;
}

CsvTable distance_table(const DistanceSeries& s) {
    CsvTable t;
    t.header = {"t", "dist_h", "dist_v"};
    for (std::size_t i = 0; i < s.t.size(); ++i)
        t.add_row({format_double(s.t[i]), format_double(s.dist_h[i]), format_double(s.dist_v[i])});
    return t;
}

CsvTable regularity_table(const std::vector<RegularityRow>& rows) {
    CsvTable t;
    t.header = {"r", "sup_v_norm_sq", "sup_au_norm", "sup_ut_norm", "sup_lbeta_pow", "samples"};
    for (const auto& r : rows)
        t.add_row({format_double(r.r), format_double(r.v_norm_sq), format_double(r.au_norm),
                   format_double(r.ut_norm), format_double(r.lbeta_pow), fmt_int((long long)r.samples)});
    return t;
}

}  // namespace bfns
