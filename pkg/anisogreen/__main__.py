from anisogreen.main import run

run()
