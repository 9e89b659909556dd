from otikit.cli import main

main()
