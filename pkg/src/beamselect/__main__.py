from beamselect.cli import main

main()
