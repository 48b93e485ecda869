#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
motif-agm - overlapping community detection by adversarial training of
a clique generator and discriminator over nonnegative affiliations.
"""

from __future__ import print_function

import argparse
import os
import sys
import time
from dataclasses import asdict

import numpy as np

from motif_agm import __version__
from motif_agm.agm import (AffiliationMatrix, assign_communities,
                           compute_threshold)
from motif_agm.config import TrainConfig, load_config_file, \
    parse_config_value
from motif_agm.cover import CommunityAssignment
from motif_agm.errors import MotifAGMError, ParameterError
from motif_agm.evaluation import (append_csv_row, build_clique_split,
                                  clique_prediction_auc, f1_score,
                                  format_report, motif_community_stats,
                                  motif_size_table, overlapping_nmi)
from motif_agm.graph import enumerate_cliques
from motif_agm.graphutils import GraphUtils
from motif_agm.listener.cli import CLITrainingListener
from motif_agm.listener.json import JSONTrainingListener
from motif_agm.manifest import RunManifest, write_run_metadata
from motif_agm.synth import PlantedSpec, generate, planted_statistics
from motif_agm.trainer import best_community_count, \
    score_community_counts, train
from motif_agm.utils import abort

# CLI flags that override TrainConfig fields of the same name
CONFIG_FLAGS = ('clique_size', 'communities', 'init', 'max_iterations',
                'lr', 'seed', 'threads', 'pretrain_epochs',
                'community_candidates', 'debug')

# Affiliation files written by detect and read back by --resume
CHECKPOINT_SUFFIXES = ('.theta_g.tsv', '.theta_d.tsv')


def add_common_arguments(parser):
    parser.add_argument('-h', '--help', action='help',
                        help='Show this help message and exit')
    parser.add_argument('-d', '--debug', dest='debug', action='store_true',
                        default=None, help='Show debugging')
    parser.add_argument('-q', '--quiet', dest='quiet', action='store_true',
                        help='Suppress progress output')
    parser.add_argument('--manifest', dest='manifest', metavar='PATH',
                        help='Where to write the run manifest')


def add_training_arguments(parser):
    parser.add_argument('-g', '--graph', dest='graph', required=True,
                        metavar='PATH', help='Edge list to analyse')
    parser.add_argument('--config', dest='config', metavar='PATH',
                        help='key=value file of training settings')
    parser.add_argument('-m', '--clique-size', dest='clique_size', type=int,
                        metavar='M', help='Clique (motif) size [3]')
    parser.add_argument('-k', '--num-communities', dest='communities',
                        metavar='C|auto',
                        help="Number of communities, or 'auto' [auto]")
    parser.add_argument('--candidates', dest='community_candidates',
                        metavar='C,C,...',
                        help='Community counts tried by auto [2,4,8,16]')
    parser.add_argument('--init', dest='init',
                        choices=('agm-pretrain', 'locally-minimal'),
                        help='Initialisation method [agm-pretrain]')
    parser.add_argument('--pretrain-epochs', dest='pretrain_epochs',
                        type=int, metavar='N',
                        help='AGM pretraining epochs [30]')
    parser.add_argument('-i', '--iters', dest='max_iterations', type=int,
                        metavar='N', help='Maximum outer iterations [20]')
    parser.add_argument('--lr', dest='lr', type=float, metavar='RATE',
                        help='Learning rate [0.001]')
    parser.add_argument('-s', '--seed', dest='seed', type=int,
                        metavar='SEED', help='Random seed [0]')
    parser.add_argument('-t', '--threads', dest='threads', type=int,
                        metavar='N', help='Generation threads [1]')


def parse_args(argv):
    #####################################################################
    # REMINDER!!  If you change this, remember to update USAGE.md too.
    #####################################################################
    parser = argparse.ArgumentParser(
        prog='motif-agm',
        description='Detects densely overlapping communities by training '
                    'a clique generator against a clique discriminator.',
        add_help=False
    )
    parser.add_argument('-h', '--help', action='help',
                        help='Show this help message and exit')
    parser.add_argument('-v', '--version', action='version',
                        version='motif-agm {ver}'.format(ver=__version__))
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    detect = commands.add_parser('detect', add_help=False,
                                 help='Detect communities in a graph')
    add_common_arguments(detect)
    add_training_arguments(detect)
    detect.add_argument('-o', '--communities-out', dest='communities_out',
                        default='communities.txt', metavar='PATH',
                        help='Detected communities [%(default)s]')
    detect.add_argument('-e', '--embeddings-prefix', dest='embeddings',
                        metavar='PREFIX',
                        help='Prefix for the affiliation TSVs and run '
                        'metadata [communities-out without extension]')
    detect.add_argument('--resume', dest='resume', metavar='PREFIX',
                        help='Start from the affiliations saved under '
                        'PREFIX by an earlier run')
    detect.set_defaults(func=cmd_detect)

    evaluate = commands.add_parser('eval', add_help=False,
                                   help='Compare detected communities with '
                                   'ground truth')
    add_common_arguments(evaluate)
    evaluate.add_argument('--detected', dest='detected', required=True,
                          metavar='PATH', help='Detected communities')
    evaluate.add_argument('--truth', dest='truth', required=True,
                          metavar='PATH', help='Ground-truth communities')
    evaluate.add_argument('--vertices', dest='vertex_count', type=int,
                          metavar='N', help='Vertex universe size for NMI '
                          '[union of both covers]')
    evaluate.add_argument('--csv', dest='csv', metavar='PATH',
                          help='Append the metrics as a CSV row')
    evaluate.set_defaults(func=cmd_eval)

    synth = commands.add_parser('synth', add_help=False,
                                help='Generate a planted overlapping '
                                'community graph')
    add_common_arguments(synth)
    synth.add_argument('-n', '--vertices', dest='vertices', type=int,
                       default=1000, metavar='V', help='[%(default)s]')
    synth.add_argument('-k', '--communities', dest='communities', type=int,
                       default=200, metavar='C', help='[%(default)s]')
    synth.add_argument('-a', '--memberships', dest='memberships',
                       type=float, default=3.0, metavar='A',
                       help='Mean memberships per vertex [%(default)s]')
    synth.add_argument('--heavy-tail', dest='heavy_tail',
                       action='store_true',
                       help='Geometric rather than Poisson memberships')
    synth.add_argument('--p-in', dest='p_in', type=float, default=0.5,
                       help='Edge probability inside a community '
                       '[%(default)s]')
    synth.add_argument('--p-out', dest='p_out', type=float, default=0.0,
                       help='Background edge probability [%(default)s]')
    synth.add_argument('-s', '--seed', dest='seed', type=int, default=0,
                       help='Random seed [%(default)s]')
    synth.add_argument('--graph-out', dest='graph_out', required=True,
                       metavar='PATH', help='Edge list to write')
    synth.add_argument('--truth-out', dest='truth_out', required=True,
                       metavar='PATH', help='Ground-truth communities to '
                       'write')
    synth.set_defaults(func=cmd_synth)

    stats = commands.add_parser('stats', add_help=False,
                                help='Clique occurrence inside communities '
                                'versus the whole graph')
    add_common_arguments(stats)
    stats.add_argument('-g', '--graph', dest='graph', required=True,
                       metavar='PATH')
    stats.add_argument('--truth', dest='truth', required=True,
                       metavar='PATH')
    stats.add_argument('--sizes', dest='sizes', default='2,3,4',
                       help='Clique sizes [%(default)s]')
    stats.add_argument('--trials', dest='trials', type=int, default=100000,
                       help='Samples per size and source [%(default)s]')
    stats.add_argument('-s', '--seed', dest='seed', type=int, default=0)
    stats.set_defaults(func=cmd_stats)

    cliquepred = commands.add_parser('cliquepred', add_help=False,
                                     help='Hide cliques, train, and score '
                                     'them by AUC')
    add_common_arguments(cliquepred)
    add_training_arguments(cliquepred)
    cliquepred.add_argument('--fraction', dest='fraction', type=float,
                            default=0.1, help='Share of edges covered by '
                            'hidden cliques [%(default)s]')
    cliquepred.add_argument('--method', dest='method', default='logistic',
                            choices=('logistic', 'agm'),
                            help='Clique scorer [%(default)s]')
    cliquepred.set_defaults(func=cmd_cliquepred)

    select = commands.add_parser('select', add_help=False,
                                 help='Choose the number of communities on '
                                 'held-out edges')
    add_common_arguments(select)
    add_training_arguments(select)
    select.set_defaults(func=cmd_select)

    return parser.parse_args(argv)


def resolve_config(options):
    file_values = load_config_file(options.config) if options.config else {}
    flag_values = {}
    for name in CONFIG_FLAGS:
        value = getattr(options, name, None)
        if isinstance(value, str):
            value = parse_config_value(name, value)
        flag_values[name] = value
    return TrainConfig.resolve(file_values, flag_values)


def start_manifest(command, options, cfg=None, sources=None):
    manifest = RunManifest(command=command)
    if cfg is not None:
        manifest.config = cfg.as_dict()
        manifest.config_sources = sources
        manifest.seed = cfg.seed
    return manifest


def finish_manifest(manifest, options, started, default_path=None):
    path = options.manifest or default_path
    if path:
        manifest.wall_clock = time.time() - started
        manifest.write(path)


def run_training(g, cfg, options, manifest, initial=None):
    idx = enumerate_cliques(g, cfg.clique_size)
    history = JSONTrainingListener(options)
    state = train(g, idx, cfg, [CLITrainingListener(options), history],
                  initial)
    manifest.history = history.json()
    return state


def cmd_detect(options):
    started = time.time()
    cfg, sources = resolve_config(options)
    g = GraphUtils.load_edge_list(options.graph)
    manifest = start_manifest('detect', options, cfg, sources)
    manifest.add_input(options.graph)
    if options.config:
        manifest.add_input(options.config)

    initial = None
    if options.resume:
        paths = [options.resume + suffix for suffix in CHECKPOINT_SUFFIXES]
        initial = tuple(AffiliationMatrix.read_tsv(path, g) for path in paths)
        for path in paths:
            manifest.add_input(path)

    state = run_training(g, cfg, options, manifest, initial)
    threshold = compute_threshold(g)
    cover = assign_communities(state.theta_G, state.theta_D, threshold)

    prefix = options.embeddings or os.path.splitext(
        options.communities_out)[0]
    GraphUtils.write_communities(cover.communities, options.communities_out,
                                 g)
    g_path, d_path = [prefix + suffix for suffix in CHECKPOINT_SUFFIXES]
    state.theta_G.write_tsv(g_path, g.vertex_ids)
    state.theta_D.write_tsv(d_path, g.vertex_ids)
    write_run_metadata(prefix + '.meta.txt', state)
    for path in (options.communities_out, g_path, d_path,
                 prefix + '.meta.txt'):
        manifest.add_output(path)

    manifest.metrics = {
        'communities': len(cover),
        'empty_communities': cover.empty_count,
        'delta': threshold.delta,
        'epsilon': threshold.epsilon,
        'iterations': state.iteration,
        'converged': state.converged,
        'train_seconds': state.wall_clock,
    }
    if not options.quiet:
        print(format_report(manifest.metrics), end='')
    finish_manifest(manifest, options, started, prefix + ".manifest.json")
    return 0


def cmd_eval(options):
    started = time.time()
    truth = CommunityAssignment.from_sets(
        GraphUtils.load_communities(options.truth), 'ground-truth')
    detected = CommunityAssignment.from_sets(
        GraphUtils.load_communities(options.detected))
    metrics = {
        'f1': f1_score(truth, detected),
        'nmi': overlapping_nmi(truth, detected, options.vertex_count),
        'truth_communities': len(truth),
        'detected_communities': len(detected),
    }
    print(format_report(metrics), end='')
    if options.csv:
        row = {'detected': options.detected, 'truth': options.truth}
        row.update(metrics)
        append_csv_row(options.csv, row)
    manifest = start_manifest('eval', options)
    manifest.add_input(options.detected)
    manifest.add_input(options.truth)
    manifest.metrics = metrics
    finish_manifest(manifest, options, started)
    return 0


def cmd_synth(options):
    started = time.time()
    spec = PlantedSpec(vertex_count=options.vertices,
                       community_count=options.communities,
                       mean_memberships=options.memberships,
                       heavy_tail=options.heavy_tail,
                       p_in=options.p_in, p_out=options.p_out,
                       seed=options.seed)
    g, truth = generate(spec)
    GraphUtils.write_edge_list(g, options.graph_out)
    GraphUtils.write_communities(truth.communities, options.truth_out, g)
    stats = planted_statistics(g, truth)
    if not options.quiet:
        print(format_report(stats), end='')
    manifest = start_manifest('synth', options)
    manifest.config = asdict(spec)
    manifest.seed = spec.seed
    manifest.add_output(options.graph_out)
    manifest.add_output(options.truth_out)
    manifest.metrics = stats
    finish_manifest(manifest, options, started)
    return 0


def parse_sizes(text):
    try:
        return [int(s) for s in text.split(',')]
    except ValueError:
        raise ParameterError("--sizes takes comma-separated integers, "
                             "got %r" % text)


def cmd_stats(options):
    started = time.time()
    g = GraphUtils.load_edge_list(options.graph)
    truth = CommunityAssignment.from_sets(
        GraphUtils.load_communities(options.truth, g), 'ground-truth')
    sizes = parse_sizes(options.sizes)
    rng = np.random.default_rng(options.seed)
    report = {}
    for row in motif_community_stats(g, truth, sizes, options.trials, rng):
        prefix = '%d_clique' % row.size
        report[prefix + '.community'] = row.within_community
        report[prefix + '.global'] = row.global_
        report[prefix + '.skipped_communities'] = row.skipped_communities
        for shared, value in row.shared_curve.items():
            report['%s.shared_%d' % (prefix, shared)] = value
            report['%s.shared_%d.samples' % (prefix, shared)] = \
                row.shared_counts[shared]
    for row in motif_size_table(g, sizes):
        report['%d_clique.count' % row['m']] = row['cliques']
        report['%d_clique.covered_vertices' % row['m']] = row['covered']
    print(format_report(report), end='')
    manifest = start_manifest('stats', options)
    manifest.config = {'sizes': sizes, 'trials': options.trials}
    manifest.seed = options.seed
    manifest.add_input(options.graph)
    manifest.add_input(options.truth)
    manifest.metrics = report
    finish_manifest(manifest, options, started)
    return 0


def cmd_cliquepred(options):
    started = time.time()
    cfg, sources = resolve_config(options)
    g = GraphUtils.load_edge_list(options.graph)
    manifest = start_manifest('cliquepred', options, cfg, sources)
    manifest.add_input(options.graph)

    rng = np.random.default_rng(cfg.seed)
    split = build_clique_split(g, cfg.clique_size, options.fraction, rng)
    state = run_training(split.train_graph, cfg, options, manifest)
    auc = clique_prediction_auc(g, split, state.theta_G, cfg.clique_size,
                                rng, method=options.method)
    manifest.metrics = {
        'auc': auc,
        'hidden_cliques': len(split.positives),
        'achieved_fraction': split.achieved_fraction,
    }
    print(format_report(manifest.metrics), end='')
    finish_manifest(manifest, options, started)
    return 0


def cmd_select(options):
    started = time.time()
    cfg, sources = resolve_config(options)
    g = GraphUtils.load_edge_list(options.graph)
    idx = enumerate_cliques(g, cfg.clique_size)
    scores = score_community_counts(g, idx, cfg.community_candidates, cfg)
    best = best_community_count(scores)
    report = {'score.%d' % C: value for C, value in sorted(scores.items())}
    report['communities'] = best
    print(format_report(report), end='')
    manifest = start_manifest('select', options, cfg, sources)
    manifest.add_input(options.graph)
    manifest.metrics = report
    finish_manifest(manifest, options, started)
    return 0


def main(argv):
    options = parse_args(argv)
    try:
        return options.func(options)
    except MotifAGMError as e:
        abort(e.message(), e.exit_code)
    except (IOError, OSError) as e:
        abort(str(e), 2)
    except KeyboardInterrupt:
        abort("Interrupted", 1)
    except Exception as e:
        if options.debug:
            raise
        abort("%s: %s" % (e.__class__.__name__, e), 1)


def run():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
