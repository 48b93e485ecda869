from motif_agm.listener.base import TrainingListener


class JSONTrainingListener(TrainingListener):
    """Training listener that compiles the run history into a
    JSON-serialisable dict, embedded in the run manifest.
    """

    def __init__(self, options=None):
        super(JSONTrainingListener, self).__init__(options)

        self._json = {
            'pretrain': [],
            'iterations': [],
            'converged': False,
        }

    def pretrain_epoch(self, epoch, objective):
        self._json['pretrain'].append({
            'epoch': epoch,
            'objective': objective,
        })

    def iteration_done(self, state, g_reward, d_objective, validation):
        self._json['iterations'].append({
            'iteration': state.iteration,
            'g_reward': g_reward,
            'd_objective': d_objective,
            'validation': validation,
        })

    def converged(self, state):
        self._json['converged'] = True

    def all_done(self, state):
        self._json['communities'] = state.theta_G.cols
        self._json['final_iteration'] = state.iteration

    def json(self):
        return self._json
