from __future__ import print_function

from motif_agm.listener.base import TrainingListener


class CLITrainingListener(TrainingListener):
    """Training listener for use when running in CLI mode.

    Prints one line per outer iteration as it finishes, so long runs
    show progress without waiting for the final report.
    """

    def __init__(self, options=None):
        super(CLITrainingListener, self).__init__(options)
        self.quiet = bool(getattr(options, 'quiet', False))

    def say(self, msg):
        if not self.quiet:
            print(msg)

    def training_started(self, state):
        g = self.graph()
        self.say("Training on %d vertices, %d edges, %d communities" %
                 (g.vertex_count, g.edge_count, state.theta_G.cols))

    def pretrain_done(self, state):
        self.say("pretrain  validation=%.6f" % state.history[-1])

    def iteration_done(self, state, g_reward, d_objective, validation):
        self.say("iter %4d  reward=%.6f  d_objective=%.6f  "
                 "validation=%.6f" %
                 (state.iteration, g_reward, d_objective, validation))

    def converged(self, state):
        self.say("Converged after %d iterations" % state.iteration)
