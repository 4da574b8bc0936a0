"""Command-line entry point.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
Set CASCADA_LOG to a logging level name (e.g. DEBUG) for verbose output.
"""

import json
import logging
import os
from pathlib import Path

import click

from .core import DecodeParams, LanguageCode, read_wav, write_wav
from .harness import (
    ManifestError,
    SamplingPlan,
    SurveyError,
    aggregate_mos,
    bench_asr,
    eval_s2st_bleu,
    load_manifest,
)
from .mocks import NoiseSpec, load_lexicon, mock_backends, noisy_asr, tone_asr
from .pipeline import PipelineConfig, StageError, build_backends, run_cascade
from .reports import (
    asr_bench_payload,
    mos_payload,
    render_asr_bench_md,
    render_mos_md,
    render_s2st_bleu_md,
    s2st_bleu_payload,
    write_json_report,
    write_markdown_report,
)

log = logging.getLogger("cascada")


def _load_config(config_path, src, tgt, preserve_prosody=None) -> PipelineConfig:
    raw = {}
    if config_path:
        raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
    if src:
        raw["source_lang"] = src
    if tgt:
        raw["target_lang"] = tgt
    if preserve_prosody is not None:
        raw["preserve_prosody"] = preserve_prosody
    if "source_lang" not in raw or "target_lang" not in raw:
        raise click.UsageError("source and target languages required (--src/--tgt or config file)")
    try:
        return PipelineConfig.from_dict(raw)
    except (ValueError, KeyError) as exc:
        raise click.UsageError(f"invalid configuration: {exc}")


@click.group()
def main():
    """Cascade speech-to-speech translation and evaluation harness."""
    level = os.environ.get("CASCADA_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--src", required=True, help="Source language code, e.g. es")
@click.option("--tgt", required=True, help="Target language code, e.g. en")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_path", type=click.Path(dir_okay=False))
@click.option("--no-prosody", is_flag=True, help="Disable voice conversion (vanilla TTS)")
def translate(input_path, src, tgt, config_path, output_path, no_prosody):
    """Translate a single WAV clip; writes output audio plus a JSON sidecar."""
    config = _load_config(config_path, src, tgt, preserve_prosody=not no_prosody)
    if output_path is None:
        output_path = str(Path(input_path).with_suffix(".translated.wav"))
    try:
        clip = read_wav(input_path)
        backends = build_backends(config)
        result = run_cascade(clip, config, backends, utterance_id=Path(input_path).stem)
        write_wav(result.output_audio, output_path)
    except StageError as exc:
        raise click.ClickException(str(exc))
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    sidecar = {
        "input": str(input_path),
        "output": str(output_path),
        "transcript": result.transcript,
        "translation": result.translation,
        "vc_applied": config.preserve_prosody,
        "stage_timings": result.stage_timings,
        "total_latency_s": result.total_latency_s,
    }
    sidecar_path = Path(output_path).with_suffix(".json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote {output_path} and {sidecar_path}")


@main.command("bench-s2st")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--clips", "clips", required=True, type=int, help="Clips sampled per iteration")
@click.option("--iterations", required=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--out-dir", default="reports", type=click.Path(file_okay=False))
@click.option("--name", default="s2st_bleu")
def bench_s2st(manifest_path, config_path, clips, iterations, seed, out_dir, name):
    """Back-transcription BLEU under the seeded repeated-sampling protocol."""
    try:
        manifest = load_manifest(manifest_path)
    except ManifestError as exc:
        raise click.ClickException(str(exc))
    config = _load_config(config_path,
                          manifest.utterances[0].source_lang,
                          manifest.utterances[0].target_lang)
    try:
        plan = SamplingPlan(clips, iterations, seed)
        result = eval_s2st_bleu(manifest, config, build_backends(config), plan)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except RuntimeError as exc:
        raise click.ClickException(str(exc))
    write_json_report(s2st_bleu_payload(result), out_dir, name)
    write_markdown_report(render_s2st_bleu_md(result), out_dir, name)
    click.echo(f"BLEU-c: {result.summary.mean:.2f} ± {result.summary.std:.2f}")


def _parse_backend_spec(entry: str):
    """Parse --backend NAME=SPEC into (name, asr callable factory)."""
    if "=" not in entry:
        raise click.UsageError(f"--backend must be NAME=SPEC, got {entry!r}")
    name, spec = entry.split("=", 1)
    kind, _, args_str = spec.partition(":")
    args = {}
    if kind in ("tone", "noisy") and args_str:
        for part in args_str.split(","):
            key, _, value = part.partition("=")
            args[key] = value
    delay_s = float(args.pop("delay_ms", 0)) / 1000.0

    if kind == "tone":
        def asr(clip, lang, decode):
            if delay_s:
                import time
                time.sleep(delay_s)
            return tone_asr(clip, lang, decode)
    elif kind == "noisy":
        noise = NoiseSpec(float(args.pop("p", 0.1)), int(args.pop("seed", 0)))

        def asr(clip, lang, decode):
            if delay_s:
                import time
                time.sleep(delay_s)
            return noisy_asr(clip, lang, decode, noise)
    elif kind == "remote":
        from .remote import RemoteBackendSet, RemoteEndpoint
        remote = RemoteBackendSet({"asr": RemoteEndpoint(args_str)})
        asr = remote.asr
    else:
        raise click.UsageError(f"unknown backend kind {kind!r} (tone | noisy | remote)")
    if args:
        raise click.UsageError(f"unknown backend arguments {sorted(args)} in {entry!r}")
    return name, asr


@main.command("bench-asr")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--backend", "backend_entries", multiple=True, required=True,
              help="NAME=tone | NAME=noisy:p=0.1,seed=42[,delay_ms=5] | NAME=remote:URL")
@click.option("--out-dir", default="reports", type=click.Path(file_okay=False))
@click.option("--name", default="asr_bench")
def bench_asr_cmd(manifest_path, backend_entries, out_dir, name):
    """WER and latency benchmarking of one or more ASR backends."""
    from .harness import AsrBenchRow

    try:
        manifest = load_manifest(manifest_path)
    except ManifestError as exc:
        raise click.ClickException(str(exc))
    rows = []
    for entry in backend_entries:
        model_name, asr = _parse_backend_spec(entry)
        try:
            rows.append(bench_asr(manifest, asr, model_name=model_name))
        except Exception as exc:
            log.warning("backend %s failed: %s", model_name, exc)
            rows.append(AsrBenchRow(model_name, None, None, error=str(exc)))
    write_json_report(asr_bench_payload(rows), out_dir, name)
    write_markdown_report(render_asr_bench_md(rows), out_dir, name)
    for row in rows:
        if row.ok:
            click.echo(f"{row.model}: WER {row.wer.wer * 100:.2f}% "
                       f"latency {row.latency.per_clip_mean_s:.3f}s")
        else:
            click.echo(f"{row.model}: FAILED ({row.error})")
    if not any(row.ok for row in rows):
        raise click.ClickException("all backends failed")


@main.command()
@click.option("--survey", "survey_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--gt-reference", "gt_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON object {task: MOS-h score} for ground-truth rows")
@click.option("--out-dir", default="reports", type=click.Path(file_okay=False))
@click.option("--name", default="mos")
@click.option("--questions", default="1,2", help="Question subset for system summaries")
def mos(survey_path, gt_path, out_dir, name, questions):
    """Aggregate a MOS survey CSV into comparison tables (±std and ±ci95)."""
    gt_reference = None
    if gt_path:
        gt_reference = {k: float(v)
                        for k, v in json.loads(Path(gt_path).read_text(encoding="utf-8")).items()}
    try:
        question_subset = tuple(int(q) for q in questions.split(","))
        report = aggregate_mos(survey_path, gt_reference)
    except SurveyError as exc:
        raise click.ClickException(str(exc))
    except ValueError as exc:
        raise click.UsageError(f"invalid --questions: {exc}")
    write_json_report(mos_payload(report, question_subset), out_dir, name)
    write_markdown_report(render_mos_md(report, question_subset), out_dir, name)
    headline = report.headline(questions=question_subset)
    if headline is not None:
        click.echo(f"overall MOS-c: {headline:.1f}")


@main.command("serve-mock")
@click.option("--port", required=True, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--fail-rate", default=0.0, type=float, help="Probability of injected 500s")
@click.option("--delay-ms", default=0.0, type=float, help="Injected per-request delay")
@click.option("--fault-seed", default=0, type=int)
def serve_mock(port, host, lexicon_path, fail_rate, delay_ms, fault_seed):
    """Serve the stage wire protocol backed by the deterministic mocks."""
    from .server import MockProtocolServer

    lexicon = load_lexicon(lexicon_path) if lexicon_path else None
    backends = mock_backends(lexicon=lexicon)
    try:
        server = MockProtocolServer(backends, port=port, host=host, fail_rate=fail_rate,
                                    delay_ms=delay_ms, fault_seed=fault_seed)
    except OSError as exc:
        raise click.ClickException(f"cannot bind {host}:{port}: {exc}")
    click.echo(f"serving mock backends on {server.base_url}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()


if __name__ == "__main__":
    main()
