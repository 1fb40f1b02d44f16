#include "citybrain/log_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "citybrain/delay.hpp"
#include "citybrain/errors.hpp"

namespace citybrain {

namespace {

// The five fields are tab-separated; subjects and details are comma-joined.
// Everything that could collide with a separator is percent-escaped.
bool needs_escape(char c) {
    return c == '%' || c == '\t' || c == '\n' || c == '\r' || c == ',' || c == '=';
}

std::string escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (needs_escape(c)) {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02X", static_cast<unsigned char>(c));
            out += buf;
        } else {
            out += c;
        }
    }
    return out;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

std::optional<std::string> unescape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '%') {
            out += raw[i];
            continue;
        }
        if (i + 2 >= raw.size()) return std::nullopt;
        const int hi = hex_value(raw[i + 1]);
        const int lo = hex_value(raw[i + 2]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
    }
    return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
    throw SimError(Errc::CorruptRecord, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string serialize_log(const EventLog& log) {
    std::string out;
    for (const auto& record : log.records()) {
        out += std::to_string(record.seq);
        out += '\t';
        out += record.time.text();
        out += '\t';
        out += to_string(record.kind);
        out += '\t';
        for (std::size_t i = 0; i < record.subjects.size(); ++i) {
            if (i > 0) out += ',';
            out += escape(record.subjects[i]);
        }
        out += '\t';
        for (std::size_t i = 0; i < record.details.size(); ++i) {
            if (i > 0) out += ',';
            out += escape(record.details[i].first);
            out += '=';
            out += escape(record.details[i].second);
        }
        out += '\n';
    }
    return out;
}

EventLog parse_log(std::string_view text) {
    EventLog log;
    if (text.empty()) return log;
    if (text.back() != '\n') {
        corrupt(split(text, '\n').size(), "record is truncated (missing newline)");
    }
    text.remove_suffix(1);

    std::uint64_t last_seq = 0;
    SimTime last_time;
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        const auto fields = split(line, '\t');
        if (fields.size() != 5) {
            corrupt(line_no, "expected 5 tab-separated fields, found " +
                                 std::to_string(fields.size()));
        }

        EventRecord record;
        try {
            std::size_t used = 0;
            record.seq = std::stoull(std::string(fields[0]), &used);
            if (used != fields[0].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            corrupt(line_no, "bad sequence number '" + std::string(fields[0]) + "'");
        }
        if (record.seq <= last_seq) corrupt(line_no, "sequence numbers must increase");
        last_seq = record.seq;

        const auto time = SimTime::parse(fields[1]);
        if (!time) corrupt(line_no, "bad time '" + std::string(fields[1]) + "'");
        if (*time < last_time) corrupt(line_no, "record times must not decrease");
        record.time = *time;
        last_time = *time;

        const auto kind = event_kind_from(fields[2]);
        if (!kind) corrupt(line_no, "unknown record kind '" + std::string(fields[2]) + "'");
        record.kind = *kind;

        if (!fields[3].empty()) {
            for (auto part : split(fields[3], ',')) {
                auto subject = unescape(part);
                if (!subject) corrupt(line_no, "bad escape in subject");
                record.subjects.push_back(std::move(*subject));
            }
        }
        if (!fields[4].empty()) {
            for (auto part : split(fields[4], ',')) {
                const std::size_t eq = part.find('=');
                if (eq == std::string_view::npos) corrupt(line_no, "detail without '='");
                auto key = unescape(part.substr(0, eq));
                auto value = unescape(part.substr(eq + 1));
                if (!key || !value) corrupt(line_no, "bad escape in detail");
                record.details.emplace_back(std::move(*key), std::move(*value));
            }
        }
        log.append_record(std::move(record));
    }
    return log;
}

void write_log(const EventLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError(Errc::IoError, "cannot open '" + path + "' for writing");
    out << serialize_log(log);
    out.flush();
    if (!out) throw SimError(Errc::IoError, "failed writing '" + path + "'");
}

EventLog read_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SimError(Errc::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw SimError(Errc::IoError, "failed reading '" + path + "'");
    return parse_log(buffer.str());
}

std::string log_digest(const EventLog& log) {
    const std::uint64_t hash = fnv1a64(serialize_log(log));
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a64:") + buf;
}

}  // namespace citybrain
