Hazard = ['knife', 'gun', 'scissors']
response = client.label_detection(image=scan)
for obj in response.label_annotations:
  if obj.name in Hazard:
    return True
return False
