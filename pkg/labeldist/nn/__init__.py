from labeldist.nn.checkpoint import load_checkpoint, save_checkpoint
from labeldist.nn.model import EmbAugmentedModel, Head, MlpModel, forward, loss_and_grads, predict, predict_proba
from labeldist.nn.train import Adam, TrainConfig, TrainingLog, train, train_emb_augmented
