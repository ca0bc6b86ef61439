#include "jetflow/export.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace jetflow {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return buf;
}

void write_header(std::ostream& os, std::size_t p, std::size_t n) {
    for (std::size_t a = 0; a < p; ++a) os << (a ? "," : "") << t_name(a);
    for (std::size_t i = 0; i < n; ++i) os << "," << x_name(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a)
            os << "," << (p == 1 ? "v" + std::to_string(i + 1)
                                 : "v" + std::to_string(i + 1) + "_" + std::to_string(a + 1));
    os << "\n";
}

} // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t n) {
    write_header(os, 1, n);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << fmt(traj.ts[k]);
        for (std::size_t i = 0; i < n; ++i) os << "," << fmt(traj.xs[k][i]);
        for (std::size_t i = 0; i < n; ++i) os << "," << fmt(traj.vs[k][i]);
        os << "\n";
    }
}

void write_trajectory_json(std::ostream& os, const Trajectory& traj, std::size_t n) {
    json doc;
    doc["kind"] = "trajectory";
    doc["system"] = system_tag_name(traj.provenance);
    doc["p"] = 1;
    doc["n"] = n;
    doc["step"] = traj.step;
    doc["aborted"] = traj.aborted;
    json samples = json::array();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        json s;
        s["t"] = json::array({traj.ts[k]});
        s["x"] = traj.xs[k];
        s["v"] = traj.vs[k];
        samples.push_back(std::move(s));
    }
    doc["samples"] = std::move(samples);
    os << doc.dump(2) << "\n";
}

void write_sheet_csv(std::ostream& os, const Sheet& sheet) {
    write_header(os, sheet.p, sheet.n);
    std::vector<std::size_t> idx(sheet.p, 0);
    for (;;) {
        Vec t = sheet.t_at(idx);
        std::size_t node = sheet.node_index(idx);
        for (std::size_t a = 0; a < sheet.p; ++a) os << (a ? "," : "") << fmt(t[a]);
        for (std::size_t i = 0; i < sheet.n; ++i) os << "," << fmt(sheet.xs[node][i]);
        for (std::size_t i = 0; i < sheet.n; ++i)
            for (std::size_t a = 0; a < sheet.p; ++a) os << "," << fmt(sheet.vs[node](i, a));
        os << "\n";
        std::size_t k = 0;
        while (k < sheet.p && ++idx[k] > sheet.counts[k]) idx[k++] = 0;
        if (k == sheet.p) break;
    }
}

void write_sheet_json(std::ostream& os, const Sheet& sheet) {
    json doc;
    doc["kind"] = "sheet";
    doc["system"] = system_tag_name(sheet.provenance);
    doc["p"] = sheet.p;
    doc["n"] = sheet.n;
    doc["t0"] = sheet.t0;
    doc["steps"] = sheet.steps;
    doc["counts"] = sheet.counts;
    json points = json::array();
    std::vector<std::size_t> idx(sheet.p, 0);
    for (;;) {
        std::size_t node = sheet.node_index(idx);
        json pt;
        pt["idx"] = idx;
        pt["t"] = sheet.t_at(idx);
        pt["x"] = sheet.xs[node];
        json vrows = json::array();
        for (std::size_t i = 0; i < sheet.n; ++i) {
            json row = json::array();
            for (std::size_t a = 0; a < sheet.p; ++a) row.push_back(sheet.vs[node](i, a));
            vrows.push_back(std::move(row));
        }
        pt["v"] = std::move(vrows);
        points.push_back(std::move(pt));
        std::size_t k = 0;
        while (k < sheet.p && ++idx[k] > sheet.counts[k]) idx[k++] = 0;
        if (k == sheet.p) break;
    }
    doc["points"] = std::move(points);
    os << doc.dump(2) << "\n";
}

Trajectory read_trajectory_json(std::istream& is) {
    json doc = json::parse(is);
    if (doc.value("kind", "") != "trajectory") throw InputError("not a trajectory document");
    Trajectory traj;
    traj.step = doc["step"].get<double>();
    traj.aborted = doc.value("aborted", false);
    for (const auto& s : doc["samples"]) {
        traj.ts.push_back(s["t"][0].get<double>());
        traj.xs.push_back(s["x"].get<Vec>());
        traj.vs.push_back(s["v"].get<Vec>());
    }
    return traj;
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InputError("empty CSV");
    // column count from the header: 1 + n + n
    std::size_t cols = 1;
    for (char c : line) cols += (c == ',');
    if (cols < 3 || (cols - 1) % 2 != 0) throw InputError("unexpected CSV column count");
    std::size_t n = (cols - 1) / 2;
    Trajectory traj;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        Vec row;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (row.size() != cols) throw InputError("ragged CSV row");
        traj.ts.push_back(row[0]);
        traj.xs.emplace_back(row.begin() + 1, row.begin() + 1 + static_cast<std::ptrdiff_t>(n));
        traj.vs.emplace_back(row.begin() + 1 + static_cast<std::ptrdiff_t>(n), row.end());
    }
    if (traj.size() >= 2) traj.step = traj.ts[1] - traj.ts[0];
    return traj;
}

Sheet read_sheet_json(std::istream& is) {
    json doc = json::parse(is);
    if (doc.value("kind", "") != "sheet") throw InputError("not a sheet document");
    Sheet sheet;
    sheet.p = doc["p"].get<std::size_t>();
    sheet.n = doc["n"].get<std::size_t>();
    sheet.t0 = doc["t0"].get<Vec>();
    sheet.steps = doc["steps"].get<std::vector<double>>();
    sheet.counts = doc["counts"].get<std::vector<std::size_t>>();
    std::size_t total = 1;
    for (std::size_t a = 0; a < sheet.p; ++a) total *= sheet.counts[a] + 1;
    sheet.xs.assign(total, Vec());
    sheet.vs.assign(total, Mat());
    for (const auto& pt : doc["points"]) {
        auto idx = pt["idx"].get<std::vector<std::size_t>>();
        std::size_t node = sheet.node_index(idx);
        sheet.xs[node] = pt["x"].get<Vec>();
        Mat v(sheet.n, sheet.p);
        for (std::size_t i = 0; i < sheet.n; ++i)
            for (std::size_t a = 0; a < sheet.p; ++a) v(i, a) = pt["v"][i][a].get<double>();
        sheet.vs[node] = std::move(v);
    }
    return sheet;
}

} // namespace jetflow
