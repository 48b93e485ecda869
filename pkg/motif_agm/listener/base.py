class TrainingListener(object):
    """Class for listening to progress events generated by
    CommunityTrainer.  Add an instance of this class to a
    CommunityTrainer instance via CommunityTrainer.add_listener().
    """

    def __init__(self, options=None):
        self.options = options

    def set_trainer(self, trainer):
        self.trainer = trainer

    def graph(self):
        return self.trainer.g

    def training_started(self, state):
        pass

    def pretrain_epoch(self, epoch, objective):
        pass

    def pretrain_done(self, state):
        pass

    def iteration_done(self, state, g_reward, d_objective, validation):
        pass

    def converged(self, state):
        pass

    def all_done(self, state):
        pass
