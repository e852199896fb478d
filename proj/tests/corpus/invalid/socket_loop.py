Alert = ['smoke', 'fire']
response = client.label_detection(image=frame)
while sock.connected:
    frame = sock.read()
