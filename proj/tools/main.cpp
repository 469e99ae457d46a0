#include "commands.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

using namespace echomark::cli;

void add_key_options(CLI::App* cmd, KeyRef& key)
{
    cmd->add_option("-k,--key-file", key.key_file, "key file (echomark-keys JSON)");
    cmd->add_option("--key-id", key.key_id, "key id inside the key file");
    cmd->add_option("--delta", key.delta, "inline single-echo lag in samples")
        ->check(CLI::Range(1, 100000));
    cmd->add_option("--alpha", key.alpha, "inline single-echo amplitude")->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"echomark: echo-hiding watermarks for audio datasets"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "echomark 0.1.0");

    GlobalOptions global;
    std::string report_format = "json";
    app.add_option("--seed", global.seed, "seed for every random choice")->capture_default_str();
    app.add_option("-j,--jobs", global.jobs, "worker threads")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    app.add_option("--sample-rate", global.sample_rate, "working sample rate in Hz")
        ->check(CLI::Range(8000, 384000))
        ->capture_default_str();
    app.add_option("--format", report_format, "report format for detect")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    GenPatternsOptions gen;
    auto* gen_cmd = app.add_subcommand("gen-patterns", "generate a spread pattern set");
    gen_cmd->add_option("--count", gen.count, "number of patterns")->capture_default_str();
    gen_cmd->add_option("--length", gen.length, "pattern length L")->capture_default_str();
    gen_cmd->add_option("-o,--out", gen.out, "pattern set output")->required();
    gen_cmd->add_option("--max-gap", gen.max_gap, "largest allowed gap between sorted distances (0: 2L/count)");
    gen_cmd->add_option("--min-distance", gen.min_distance, "smallest pairwise distance (0: L/(2 count))");
    gen_cmd->add_option("--max-attempts", gen.max_attempts, "retry budget")->capture_default_str();
    gen_cmd->add_option("--key-out", gen.key_out, "also write a spread key file");
    gen_cmd->add_option("--alpha", gen.alpha, "spread key amplitude")->capture_default_str();
    gen_cmd->add_option("--delta", gen.delta, "spread key offset")->capture_default_str();

    EmbedOptions emb;
    bool no_resample = false;
    auto* emb_cmd = app.add_subcommand("embed", "embed a watermark into one file");
    emb_cmd->add_option("input", emb.in, "input WAV")->required()->check(CLI::ExistingFile);
    emb_cmd->add_option("output", emb.out, "output WAV")->required();
    add_key_options(emb_cmd, emb.key);
    emb_cmd->add_flag("--no-resample", no_resample, "keep the source sample rate");
    emb_cmd->add_option("--output-format", emb.format, "float32, pcm16 or source")
        ->check(CLI::IsMember({"float32", "pcm16", "source"}))
        ->capture_default_str();

    std::filesystem::path manifest;
    auto* tag_cmd = app.add_subcommand("tag-dataset", "embed keys across a dataset manifest");
    tag_cmd->add_option("manifest", manifest, "manifest JSON")->required()->check(CLI::ExistingFile);

    DetectOptions det;
    std::string band_text;
    auto* det_cmd = app.add_subcommand("detect", "measure echo z-scores in one file");
    det_cmd->add_option("input", det.in, "input WAV")->required()->check(CLI::ExistingFile);
    add_key_options(det_cmd, det.key);
    det_cmd->add_option("--mode", det.mode, "single or spread (default: from the key)")
        ->check(CLI::IsMember({"single", "spread"}));
    det_cmd->add_option("--band", band_text, "lag band FIRST:LAST");
    det_cmd->add_flag("--enhanced", det.enhanced, "sharpen the spread correlation peak");
    det_cmd->add_flag("--profile", det.profile, "include the full z profile in JSON");

    PayloadOptions pay;
    auto* pay_cmd = app.add_subcommand("payload", "windowed two-lag payload codec");
    pay_cmd->add_option("action", pay.action, "encode or decode")
        ->required()
        ->check(CLI::IsMember({"encode", "decode"}));
    pay_cmd->add_option("input", pay.in, "input WAV")->required()->check(CLI::ExistingFile);
    pay_cmd->add_option("-o,--out", pay.out, "output WAV (encode)");
    pay_cmd->add_option("--bits", pay.bits_hex, "payload as hex, MSB first (encode)");
    pay_cmd->add_option("-n,--n-bits", pay.n_bits, "number of bits");
    pay_cmd->add_option("--delta0", pay.config.delta0, "lag for bit 0")->capture_default_str();
    pay_cmd->add_option("--delta1", pay.config.delta1, "lag for bit 1")->capture_default_str();
    pay_cmd->add_option("--alpha", pay.config.alpha, "echo amplitude")->capture_default_str();
    pay_cmd->add_option("--window", pay.config.window, "samples per bit")->capture_default_str();
    pay_cmd->add_option("--output-format", pay.format, "float32, pcm16 or source")
        ->check(CLI::IsMember({"float32", "pcm16", "source"}))
        ->capture_default_str();

    std::filesystem::path experiment;
    auto* eval_cmd = app.add_subcommand("evaluate", "run an experiment config");
    eval_cmd->add_option("config", experiment, "experiment JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    if (gen_cmd->parsed())
        return cmd_gen_patterns(gen, global, out, err);
    if (emb_cmd->parsed()) {
        emb.resample = !no_resample;
        return cmd_embed(emb, global, out, err);
    }
    if (tag_cmd->parsed())
        return cmd_tag_dataset(manifest, global, out, err);
    if (det_cmd->parsed()) {
        det.format = report_format;
        if (!band_text.empty()) {
            try {
                det.band = parse_band(band_text);
            } catch (const std::exception& e) {
                err << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }
        return cmd_detect(det, global, out, err);
    }
    if (pay_cmd->parsed())
        return cmd_payload(pay, global, out, err);
    if (eval_cmd->parsed())
        return cmd_evaluate(experiment, global, out, err);
    return kExitUsage;
}
