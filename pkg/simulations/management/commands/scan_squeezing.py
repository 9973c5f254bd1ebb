from simulations.management.commands._base import SimulationCommand


class Command(SimulationCommand):
    help = "Bell parameter vs squeezing for fading and deterministic-loss channels (CSV)."

    def run_engine(self, engine):
        return engine.scan_squeezing()
