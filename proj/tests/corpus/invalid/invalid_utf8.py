Recycle = ['glass']
Bad = ['caf�']
